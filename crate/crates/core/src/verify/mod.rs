//! Verification of bound relations in exact, sample and limit modes.
//!
//! Sample mode is a certificate, not a spot check: every residual entry is
//! `p/D` with `D` and the exponent range of `p` bounded by [`DegreeMeta`],
//! so vanishing at more distinct points with `D ≠ 0` than that range allows
//! forces `p = 0`.

mod report;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dsl::{BindError, Binder, Mode, Relation, Suite};
use crate::fock::{
    equal_on_interior, interior_states, random_gauge, resolve_margin, AtPoint, Coeff, DegreeMeta,
    Field, Fock, FockError, Margin, ModeConfig, Outcome, SparseOperator, Witness,
};
use crate::gens::Realization;
use crate::scalar::{GaussianRational, Rational, Scalar, ScalarError};

pub use report::{ConfigEcho, RelationRecord, Report, WitnessRecord};

pub const ENGINE_VERSION: &str = concat!("qhiggs-core ", env!("CARGO_PKG_VERSION"));

/// Consecutive unusable sample points tolerated per relation.
pub const MAX_POLE_RETRIES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleCount {
    /// The degree bound of each residual.
    Auto,
    Fixed(usize),
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub cutoff: u32,
    /// Used by relations without a `@margin` attribute.
    pub margin: Margin,
    /// Used by relations without a `@mode` attribute.
    pub mode: Mode,
    pub samples: SampleCount,
    /// Explicit sample points, consumed in order; `None` draws from `seed`.
    pub points: Option<Vec<GaussianRational>>,
    pub seed: u64,
    /// Conjugates every oscillator by a seeded random diagonal.
    pub gauge_seed: Option<u64>,
}

impl VerifyConfig {
    pub fn new(cutoff: u32) -> Self {
        VerifyConfig {
            cutoff,
            margin: Margin::Auto,
            mode: Mode::Exact,
            samples: SampleCount::Auto,
            points: None,
            seed: 0,
            gauge_seed: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("relation `{relation}`: no usable sample point after {tried} attempts")]
    Poles { relation: String, tried: usize },
}

impl From<FockError> for VerifyError {
    fn from(e: FockError) -> Self {
        VerifyError::Bind(BindError::Fock(e))
    }
}

/// `1 +` the exponent span of the residual numerator bound.
pub fn required_samples<C: Coeff>(lhs: &SparseOperator<C>, rhs: &SparseOperator<C>) -> usize {
    residual_meta(lhs, rhs).required_samples()
}

/// [`required_samples`] restricted to the columns compared under `margin`:
/// the untainted interior.
pub fn required_samples_interior<C: Coeff>(
    lhs: &SparseOperator<C>,
    rhs: &SparseOperator<C>,
    margin: Margin,
) -> usize {
    let applied = resolve_margin(lhs, rhs, margin);
    let columns: Vec<usize> = interior_states(lhs.config(), &applied)
        .into_iter()
        .filter(|&j| !lhs.is_tainted(j) && !rhs.is_tainted(j))
        .collect();
    residual_meta(lhs, rhs).required_samples_on(&columns)
}

fn residual_meta<C: Coeff>(lhs: &SparseOperator<C>, rhs: &SparseOperator<C>) -> DegreeMeta {
    lhs.meta().add(rhs.meta())
}

fn effective_margin(r: &Relation, cfg: &VerifyConfig) -> Margin {
    r.margin.map(Margin::Fixed).unwrap_or(cfg.margin)
}

fn make_fock<F: Field>(config: ModeConfig, field: F, cfg: &VerifyConfig) -> Result<Fock<F>, VerifyError> {
    let f = Fock::new(config, field);
    Ok(match cfg.gauge_seed {
        Some(seed) => f.with_gauge(random_gauge(config, seed))?,
        None => f,
    })
}

fn witness_record<C: Coeff>(w: &Witness<C>, point: Option<&GaussianRational>) -> WitnessRecord {
    WitnessRecord {
        state: w.state.0.clone(),
        target: w.target.0.clone(),
        lhs: w.lhs.to_string(),
        rhs: w.rhs.to_string(),
        point: point.map(|p| p.to_string()),
    }
}

/// Runs every relation of `suite` on the space `config`; `cfg.cutoff` is
/// ignored in favour of `config`.
pub fn run(suite: &Suite, cfg: &VerifyConfig, config: ModeConfig) -> Result<Report, VerifyError> {
    if suite.modes > config.modes() {
        return Err(BindError::ConfigTooSmall {
            needed: suite.modes,
            available: config.modes(),
        }
        .into());
    }
    let modes: Vec<Mode> = suite
        .relations
        .iter()
        .map(|r| r.mode.unwrap_or(cfg.mode))
        .collect();
    let mut records: Vec<Option<RelationRecord>> = vec![None; suite.relations.len()];

    if modes.iter().any(|m| *m != Mode::Sample) {
        let fock = make_fock(config, crate::fock::Exact, cfg)?;
        let mut binder = Binder::new(&fock, Some(suite))?;
        for (k, r) in suite.relations.iter().enumerate() {
            if modes[k] == Mode::Sample {
                continue;
            }
            let start = Instant::now();
            let lhs = binder.operator(&r.lhs)?;
            let rhs = binder.operator(&r.rhs)?;
            let margin = effective_margin(r, cfg);
            let mut rec = if modes[k] == Mode::Exact {
                let c = equal_on_interior(&lhs, &rhs, margin)?;
                RelationRecord::new(&r.name, Mode::Exact, c.outcome, c.margin, c.columns_compared)
                    .with_witness(c.witness.as_ref().map(|w| witness_record(w, None)))
            } else {
                limit_compare(&r.name, &lhs, &rhs, margin)?
            };
            rec.wall_time = start.elapsed();
            records[k] = Some(rec);
        }
    }

    let sampled: Vec<usize> = (0..modes.len()).filter(|&k| modes[k] == Mode::Sample).collect();
    if !sampled.is_empty() {
        for (k, rec) in run_sampled(suite, cfg, config, &sampled)? {
            records[k] = Some(rec);
        }
    }

    Ok(Report {
        suite: suite.name.clone(),
        config: ConfigEcho::new(suite, cfg, config),
        relations: records.into_iter().map(|r| r.expect("every relation ran")).collect(),
        engine_version: ENGINE_VERSION.to_string(),
    })
}

struct SampleState {
    index: usize,
    margin: Margin,
    target: Option<usize>,
    required: usize,
    used: usize,
    misses: usize,
    columns: usize,
    applied: Vec<u32>,
    elapsed: Duration,
    done: Option<RelationRecord>,
}

/// Points `a/b` with `2 <= a, b <= 97` and `a != b`, so never zero and
/// never on `|t| = 1`; each value is drawn at most once. Values are drawn in
/// bands of increasing height `max(a, b)`, seeded-shuffled within a band,
/// which keeps the exact arithmetic small.
struct PointSource<'a> {
    explicit: Option<&'a [GaussianRational]>,
    next: usize,
    rng: ChaCha8Rng,
    height: i64,
    band: Vec<GaussianRational>,
    seen: HashSet<Rational>,
}

impl<'a> PointSource<'a> {
    fn new(explicit: Option<&'a [GaussianRational]>, seed: u64) -> Self {
        PointSource {
            explicit,
            next: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            height: 2,
            band: Vec::new(),
            seen: HashSet::new(),
        }
    }

    fn draw(&mut self) -> Result<GaussianRational, VerifyError> {
        if let Some(list) = self.explicit {
            let p = list.get(self.next).cloned().ok_or_else(|| {
                VerifyError::Config(format!("sample points exhausted after {}", list.len()))
            })?;
            self.next += 1;
            return Ok(p);
        }
        while self.band.is_empty() {
            if self.height == 97 {
                return Err(VerifyError::Config("sample points exhausted".into()));
            }
            self.height += 1;
            let h = self.height;
            for other in 2..h {
                for (a, b) in [(h, other), (other, h)] {
                    let v = Rational::new(a, b).unwrap();
                    if self.seen.insert(v.clone()) {
                        self.band.push(GaussianRational::real(v));
                    }
                }
            }
            self.band.shuffle(&mut self.rng);
        }
        Ok(self.band.pop().expect("nonempty band"))
    }
}

fn is_pole(e: &BindError) -> bool {
    let pole = |f: &FockError| matches!(f, FockError::Scalar(ScalarError::Pole(_)));
    match e {
        BindError::Fock(f) => pole(f),
        BindError::Name {
            source: crate::gens::NameError::Build(f),
            ..
        } => pole(f),
        _ => false,
    }
}

fn vanishes_at(meta: &DegreeMeta, t0: &GaussianRational) -> bool {
    meta.denominator_factors()
        .iter()
        .any(|(f, _)| f.eval(t0).is_none_or(|v| v.is_zero()))
}

fn run_sampled(
    suite: &Suite,
    cfg: &VerifyConfig,
    config: ModeConfig,
    sampled: &[usize],
) -> Result<Vec<(usize, RelationRecord)>, VerifyError> {
    if let Some(points) = &cfg.points {
        let distinct: HashSet<&GaussianRational> = points.iter().collect();
        if distinct.len() != points.len() || points.iter().any(|p| p.is_zero()) {
            return Err(VerifyError::Config("sample points must be distinct and nonzero".into()));
        }
    }
    let mut states: Vec<SampleState> = sampled
        .iter()
        .map(|&k| SampleState {
            index: k,
            margin: effective_margin(&suite.relations[k], cfg),
            target: None,
            required: 0,
            used: 0,
            misses: 0,
            columns: 0,
            applied: Vec::new(),
            elapsed: Duration::ZERO,
            done: None,
        })
        .collect();
    let mut source = PointSource::new(cfg.points.as_deref(), cfg.seed);
    let mut bad_points = 0usize;
    while states.iter().any(|s| s.done.is_none()) {
        let t0 = source.draw()?;
        let fock = make_fock(config, AtPoint::new(t0.clone()).map_err(FockError::from)?, cfg)?;
        let mut binder = Binder::new(&fock, Some(suite))?;
        for s in states.iter_mut().filter(|s| s.done.is_none()) {
            let r = &suite.relations[s.index];
            let start = Instant::now();
            let bound = binder.operator(&r.lhs).and_then(|l| Ok((l, binder.operator(&r.rhs)?)));
            let (lhs, rhs) = match bound {
                Ok(pair) => pair,
                Err(e) if is_pole(&e) => {
                    bad_points += 1;
                    if bad_points > MAX_POLE_RETRIES {
                        return Err(VerifyError::Poles {
                            relation: r.name.clone(),
                            tried: bad_points,
                        });
                    }
                    break;
                }
                Err(e) => return Err(e.into()),
            };
            let meta = residual_meta(&lhs, &rhs);
            if s.target.is_none() {
                s.required = required_samples_interior(&lhs, &rhs, s.margin);
                let wanted = r.samples.or(match cfg.samples {
                    SampleCount::Auto => None,
                    SampleCount::Fixed(n) => Some(n),
                });
                match wanted {
                    Some(n) if n < s.required => {
                        let applied = resolve_margin(&lhs, &rhs, s.margin);
                        let mut rec =
                            RelationRecord::new(&r.name, Mode::Sample, Outcome::Inconclusive, applied, 0)
                                .with_samples(0, s.required);
                        rec.note = Some(format!(
                            "{n} samples requested, degree bound needs {}",
                            s.required
                        ));
                        s.done = Some(rec);
                        continue;
                    }
                    Some(n) => s.target = Some(n),
                    None => s.target = Some(s.required),
                }
            }
            if vanishes_at(&meta, &t0) {
                s.misses += 1;
                if s.misses > MAX_POLE_RETRIES {
                    return Err(VerifyError::Poles {
                        relation: r.name.clone(),
                        tried: s.misses,
                    });
                }
                continue;
            }
            let c = equal_on_interior(&lhs, &rhs, s.margin)?;
            s.elapsed += start.elapsed();
            s.applied = c.margin.clone();
            s.columns = c.columns_compared;
            match c.outcome {
                Outcome::Pass => {
                    s.used += 1;
                    if Some(s.used) == s.target {
                        let mut rec =
                            RelationRecord::new(&r.name, Mode::Sample, Outcome::Pass, c.margin, s.columns)
                                .with_samples(s.used, s.required);
                        rec.wall_time = s.elapsed;
                        s.done = Some(rec);
                    }
                }
                outcome => {
                    let mut rec =
                        RelationRecord::new(&r.name, Mode::Sample, outcome, c.margin, c.columns_compared)
                            .with_samples(s.used + 1, s.required)
                            .with_witness(c.witness.as_ref().map(|w| witness_record(w, Some(&t0))));
                    rec.wall_time = s.elapsed;
                    s.done = Some(rec);
                }
            }
        }
    }
    Ok(states
        .into_iter()
        .map(|s| (s.index, s.done.expect("loop ends when all are done")))
        .collect())
}

fn entry(op: &SparseOperator<Scalar>, col: usize, row: u32) -> Scalar {
    op.column(col)
        .iter()
        .find(|(k, _)| *k == row)
        .map(|(_, v)| v.clone())
        .unwrap_or_else(Scalar::zero)
}

fn show_limit(s: &Scalar) -> String {
    match s.limit_at_one() {
        Ok(v) => v.to_string(),
        Err(_) => "pole".to_string(),
    }
}

/// Compares entrywise limits at `q = 1` of `lhs − rhs` on the untainted
/// interior. A pole in the residual is a failure.
pub fn limit_compare(
    name: &str,
    lhs: &SparseOperator<Scalar>,
    rhs: &SparseOperator<Scalar>,
    margin: Margin,
) -> Result<RelationRecord, VerifyError> {
    let applied = resolve_margin(lhs, rhs, margin);
    let columns: Vec<usize> = interior_states(lhs.config(), &applied)
        .into_iter()
        .filter(|&j| !lhs.is_tainted(j) && !rhs.is_tainted(j))
        .collect();
    if columns.is_empty() {
        return Ok(RelationRecord::new(name, Mode::Limit, Outcome::Inconclusive, applied, 0));
    }
    let residual = lhs.sub(rhs)?;
    let config = lhs.config();
    for &j in &columns {
        for (k, v) in residual.column(j) {
            let bad = match v.limit_at_one() {
                Ok(z) => (!z.is_zero()).then(|| format!("limit of difference is {z}")),
                Err(_) => Some("difference has a pole at q = 1".to_string()),
            };
            if let Some(note) = bad {
                let (a, b) = (entry(lhs, j, *k), entry(rhs, j, *k));
                let w = WitnessRecord {
                    state: config.decode(j).0,
                    target: config.decode(*k as usize).0,
                    lhs: show_limit(&a),
                    rhs: show_limit(&b),
                    point: Some("1".to_string()),
                };
                let mut rec =
                    RelationRecord::new(name, Mode::Limit, Outcome::Fail, applied, columns.len())
                        .with_witness(Some(w));
                rec.note = Some(note);
                return Ok(rec);
            }
        }
    }
    Ok(RelationRecord::new(name, Mode::Limit, Outcome::Pass, applied, columns.len()))
}

/// `lim_{q→1}([M⁺, M⁻] + L³ − α₁L − α₂) = 0` with
/// `α₁ = H² + 8(𝓁₁₂² + 𝓁₃₄²) − 4`, `α₂ = −8H(𝓁₁₂² − 𝓁₃₄²)`, `𝓁² = −𝓛²/4`.
pub fn classical_alpha_check(config: ModeConfig) -> Result<RelationRecord, VerifyError> {
    classical_check_with(config, -4)
}

/// The classical check with `α₁`'s constant term replaced by `constant`.
pub(crate) fn classical_check_with(
    config: ModeConfig,
    constant: i64,
) -> Result<RelationRecord, VerifyError> {
    if config.modes() < 4 {
        return Err(VerifyError::Config("the classical check needs 4 modes".into()));
    }
    let start = Instant::now();
    let fock = Fock::exact(config);
    let r = Realization::new(&fock);
    let quad = r.qhiggs()?;
    let s12 = r.soq_l(1)?.pow(2)?;
    let s34 = r.soq_l(3)?.pow(2)?;
    let int = |k: i64| Scalar::from_int(k);
    let (l, h) = (&quad.l, &quad.h);
    let alpha1 = h
        .pow(2)?
        .sub(&fock.scale(&int(2), &s12.add(&s34)?)?)?
        .add(&fock.constant(&int(constant))?)?;
    let alpha2 = fock.scale(&int(2), &h.compose(&s12.sub(&s34)?)?)?;
    let lhs = quad.mplus.commutator(&quad.mminus)?;
    let rhs = l.pow(3)?.neg().add(&alpha1.compose(l)?)?.add(&alpha2)?;
    let mut rec = limit_compare("classical-higgs", &lhs, &rhs, Margin::Auto)?;
    rec.wall_time = start.elapsed();
    Ok(rec)
}
