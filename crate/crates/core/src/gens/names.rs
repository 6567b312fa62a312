use thiserror::Error;

use super::Realization;
use crate::fock::{Field, FockError, SparseOperator};
use crate::scalar::{Quarter, Rational, ScalarError};

/// Argument of a named generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Num(Rational),
    Tuple(Vec<Rational>),
}

impl std::fmt::Display for Arg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arg::Num(r) => write!(f, "{r}"),
            Arg::Tuple(xs) => {
                write!(f, "(")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                if xs.len() == 1 {
                    write!(f, ",")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum NameError {
    #[error("unknown generator `{0}`")]
    Unknown(String),
    #[error("`{name}` expects {expected}, got {got}")]
    Arguments {
        name: String,
        expected: String,
        got: String,
    },
    #[error(transparent)]
    Build(#[from] FockError),
}

impl From<ScalarError> for NameError {
    fn from(e: ScalarError) -> Self {
        NameError::Build(FockError::Scalar(e))
    }
}

/// Every name accepted by [`lookup`], with its meaning.
pub const NAME_TABLE: &[(&str, &str)] = &[
    ("I", "identity"),
    ("A{i}p, A{i}m", "q-oscillators A_i^+, A_i^- in the number gauge"),
    ("A{i}0", "number operator A_i^0"),
    ("N{i}", "(A_i^0)_q"),
    ("E(a=(a_1,..,a_m), c=c)", "diagonal t^(sum a_i n_i + c), t = q^(1/4)"),
    ("E(i,j)", "u(4) bilinear A_i^+ A_j^-"),
    ("J0(i), Jp(i), Jm(i)", "metaplectic su(1,1) triple on mode i"),
    ("Jt0(i), Jtp(i), Jtm(i)", "tilde form of the metaplectic triple"),
    ("Cmeta(i)", "su(1,1) Casimir of the metaplectic triple"),
    ("Jpair0(p), Jpairp(p), Jpairm(p)", "two-mode su(1,1) triple on modes 2p-1, 2p"),
    ("Jtpairp(p), Jtpairm(p)", "tilde form of the two-mode triple"),
    ("Cpair(p)", "Casimir of the two-mode triple"),
    ("Jtot0, Jtotp, Jtotm", "coproduct of the two pair triples"),
    ("Ctot", "Casimir of the total triple"),
    ("j0(p), jp(p), jm(p)", "Schwinger U_q(sl_2) images on modes 2p-1, 2p (p defaults to 1)"),
    ("j1(p), j2(p), j3(p)", "Cartesian o_q(3) generators from the Schwinger triple"),
    ("j1r(p), j2r(p)", "expanded oscillator forms of j1, j2"),
    ("L(i,i+1)", "o_{q^(1/2)}(n) generator on modes i, i+1"),
    ("L13p, L13m, L24p, L24m, L14p, L14m", "composite o_{q^(1/2)}(4) generators"),
    ("C4, C4p", "quadratic Casimir and Pfaffian-type invariant of o_{q^(1/2)}(4)"),
    ("Mplus, Mminus", "q-Higgs raising and lowering operators"),
    ("L, H", "q-Higgs diagonals (A1+A2-A3-A4 and sum of A_i^0 + 2)"),
    ("QHiggsRHS", "closed form of [Mplus, Mminus]"),
    ("Tp(alpha), Tm(alpha)", "two-mode factors with prefactor q^(alpha (A1^0+A2^0))"),
    ("K1, K2, K3", "Askey-Wilson generators from the pair triples, K3 = [K1,K2]"),
    ("K3closed", "closed product form of K3"),
    ("xi1 .. xi7, rAW", "Askey-Wilson structure parameters (times the identity where constant)"),
    ("SK1, SK2, SK3", "Askey-Wilson generators written with L, H and M^+-"),
    ("Cs1, Cs2", "(L(i,i+1)^2 + 1)/(1+q)^2 for pairs 1 and 2"),
];

fn describe(args: &[Arg], kwargs: &[(String, Arg)]) -> String {
    let mut parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
    parts.extend(kwargs.iter().map(|(k, v)| format!("{k}={v}")));
    if parts.is_empty() {
        "no arguments".into()
    } else {
        format!("({})", parts.join(", "))
    }
}

struct Call<'c> {
    name: &'c str,
    args: &'c [Arg],
    kwargs: &'c [(String, Arg)],
}

impl Call<'_> {
    fn bad(&self, expected: &str) -> NameError {
        NameError::Arguments {
            name: self.name.to_string(),
            expected: expected.to_string(),
            got: describe(self.args, self.kwargs),
        }
    }

    fn none(&self) -> Result<(), NameError> {
        if self.args.is_empty() && self.kwargs.is_empty() {
            Ok(())
        } else {
            Err(self.bad("no arguments"))
        }
    }

    fn index(a: &Arg) -> Option<usize> {
        match a {
            Arg::Num(Rational::Small { num, den: 1 }) if *num >= 1 => Some(*num as usize),
            _ => None,
        }
    }

    fn one_index(&self) -> Result<usize, NameError> {
        match (self.args, self.kwargs.is_empty()) {
            ([a], true) => Self::index(a).ok_or_else(|| self.bad("one positive integer")),
            _ => Err(self.bad("one positive integer")),
        }
    }

    fn optional_index(&self) -> Result<usize, NameError> {
        if self.args.is_empty() && self.kwargs.is_empty() {
            Ok(1)
        } else {
            self.one_index()
        }
    }

    fn two_indices(&self) -> Result<(usize, usize), NameError> {
        match (self.args, self.kwargs.is_empty()) {
            ([a, b], true) => match (Self::index(a), Self::index(b)) {
                (Some(i), Some(j)) => Ok((i, j)),
                _ => Err(self.bad("two positive integers")),
            },
            _ => Err(self.bad("two positive integers")),
        }
    }

    fn one_quarter(&self) -> Result<Quarter, NameError> {
        match (self.args, self.kwargs.is_empty()) {
            ([Arg::Num(r)], true) => {
                Quarter::from_rational(r).map_err(|_| self.bad("a multiple of 1/4"))
            }
            _ => Err(self.bad("one number")),
        }
    }
}

/// Mode index from names of the form `A3p`, `N2`.
fn mode_suffix(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

/// Builds the operator called `name` with the given arguments.
pub fn lookup<F: Field>(
    r: &Realization<'_, F>,
    name: &str,
    args: &[Arg],
    kwargs: &[(String, Arg)],
) -> Result<SparseOperator<F::C>, NameError> {
    let call = Call { name, args, kwargs };
    let fock = r.fock;
    let pair_triple = |p: usize| r.su11_pair(p);

    if let Some(rest) = name.strip_prefix('A') {
        let (idx, kind) = rest.split_at(rest.len().saturating_sub(1));
        if let Some(i) = mode_suffix(idx) {
            let op = match kind {
                "p" => Some(r.ap(i)),
                "m" => Some(r.am(i)),
                "0" => Some(r.a0(i)),
                _ => None,
            };
            if let Some(op) = op {
                call.none()?;
                return Ok(op?);
            }
        }
    }
    if let Some(i) = name.strip_prefix('N').and_then(mode_suffix) {
        call.none()?;
        return Ok(r.number(i)?);
    }

    let op = match name {
        "I" => {
            call.none()?;
            r.identity()
        }
        "E" => {
            if kwargs.is_empty() {
                let (i, j) = call.two_indices()?;
                r.u4_bilinear(i, j)?
            } else {
                diag_from_kwargs(&call, fock.config().modes())
                    .and_then(|(a, c)| Ok(fock.diag_exp(&a, c)?))?
            }
        }
        "J0" | "Jp" | "Jm" | "Jt0" | "Jtp" | "Jtm" | "Cmeta" => {
            let t = r.metaplectic(call.one_index()?)?;
            match name {
                "J0" | "Jt0" => t.j0,
                "Jp" => t.jplus,
                "Jm" => t.jminus,
                "Cmeta" => r.casimir_su11(&t)?,
                _ => {
                    let tt = r.tilde_su11(&t)?;
                    if name == "Jtp" {
                        tt.jplus
                    } else {
                        tt.jminus
                    }
                }
            }
        }
        "Jpair0" | "Jpairp" | "Jpairm" | "Jtpairp" | "Jtpairm" | "Cpair" => {
            let t = pair_triple(call.one_index()?)?;
            match name {
                "Jpair0" => t.j0,
                "Jpairp" => t.jplus,
                "Jpairm" => t.jminus,
                "Cpair" => r.casimir_su11(&t)?,
                "Jtpairp" => r.tilde_su11(&t)?.jplus,
                _ => r.tilde_su11(&t)?.jminus,
            }
        }
        "Jtot0" | "Jtotp" | "Jtotm" | "Ctot" => {
            call.none()?;
            let t = r.su11_total()?;
            match name {
                "Jtot0" => t.j0,
                "Jtotp" => t.jplus,
                "Jtotm" => t.jminus,
                _ => r.casimir_su11(&t)?,
            }
        }
        "j0" | "jp" | "jm" => {
            let t = r.schwinger_su11(call.optional_index()?)?;
            match name {
                "j0" => t.j0,
                "jp" => t.jplus,
                _ => t.jminus,
            }
        }
        "j1" | "j2" | "j3" => {
            let (j1, j2, j3) = r.cartesian_o3(call.optional_index()?)?;
            match name {
                "j1" => j1,
                "j2" => j2,
                _ => j3,
            }
        }
        "j1r" | "j2r" => {
            let (j1, j2) = r.cartesian_realized(call.optional_index()?)?;
            if name == "j1r" {
                j1
            } else {
                j2
            }
        }
        "L" => {
            if args.is_empty() && kwargs.is_empty() {
                r.higgs_l()?
            } else {
                let (i, j) = call.two_indices()?;
                if j != i + 1 {
                    return Err(call.bad("adjacent modes (i, i+1)"));
                }
                r.soq_l(i)?
            }
        }
        "H" => {
            call.none()?;
            r.higgs_h()?
        }
        "L13p" | "L13m" | "L24p" | "L24m" | "L14p" | "L14m" => {
            call.none()?;
            let (a, b, c, d, e, f) = r.soq4_composites()?;
            match name {
                "L13p" => a,
                "L13m" => b,
                "L24p" => c,
                "L24m" => d,
                "L14p" => e,
                _ => f,
            }
        }
        "C4" | "C4p" => {
            call.none()?;
            let (c4, c4p) = r.casimirs_soq4()?;
            if name == "C4" {
                c4
            } else {
                c4p
            }
        }
        "Mplus" | "Mminus" => {
            call.none()?;
            let quad = r.qhiggs()?;
            if name == "Mplus" {
                quad.mplus
            } else {
                quad.mminus
            }
        }
        "QHiggsRHS" => {
            call.none()?;
            r.qhiggs_rhs()?
        }
        "Tp" | "Tm" => {
            let (tp, tm) = r.t_pm(call.one_quarter()?)?;
            if name == "Tp" {
                tp
            } else {
                tm
            }
        }
        "K1" | "K2" | "K3" | "K3closed" | "xi1" | "xi2" | "xi3" | "xi4" | "xi5" | "xi6"
        | "xi7" | "rAW" => {
            call.none()?;
            let (a, b) = (pair_triple(1)?, pair_triple(2)?);
            match name {
                "K3closed" => r.aw_k3_closed(&a, &b)?,
                "K1" | "K2" | "K3" => {
                    let aw = r.aw_k(&a, &b)?;
                    match name {
                        "K1" => aw.k1,
                        "K2" => aw.k2,
                        _ => aw.k3,
                    }
                }
                "rAW" => {
                    let (rr, _) = r.aw_params(&a, &b)?;
                    fock.constant(&rr)?
                }
                _ => {
                    let k: usize = name[2..].parse().expect("xi index");
                    let (_, xi) = r.aw_params(&a, &b)?;
                    xi.into_iter().nth(k - 1).expect("seven parameters")
                }
            }
        }
        "SK1" | "SK2" | "SK3" => {
            call.none()?;
            let (k1, k2, k3) = r.script_k()?;
            match name {
                "SK1" => k1,
                "SK2" => k2,
                _ => k3,
            }
        }
        "Cs1" | "Cs2" => {
            call.none()?;
            r.script_casimir(if name == "Cs1" { 1 } else { 2 })?
        }
        _ => return Err(NameError::Unknown(name.to_string())),
    };
    Ok(op)
}

fn diag_from_kwargs(call: &Call<'_>, modes: usize) -> Result<(Vec<i64>, i64), NameError> {
    if !call.args.is_empty() {
        return Err(call.bad("a=(..) and c=.. or two mode indices"));
    }
    let int = |r: &Rational| match r {
        Rational::Small { num, den: 1 } => Some(*num),
        _ => None,
    };
    let mut a = None;
    let mut c = Some(0);
    for (k, v) in call.kwargs {
        match (k.as_str(), v) {
            ("a", Arg::Tuple(xs)) => {
                a = Some(
                    xs.iter()
                        .map(int)
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| call.bad("integer exponents"))?,
                )
            }
            ("a", Arg::Num(x)) => a = Some(vec![int(x).ok_or_else(|| call.bad("integer exponents"))?]),
            ("c", Arg::Num(x)) => c = int(x),
            _ => return Err(call.bad("a=(..) and c=..")),
        }
    }
    let c = c.ok_or_else(|| call.bad("an integer c"))?;
    let mut a = a.ok_or_else(|| call.bad("a=(..)"))?;
    if a.len() > modes {
        return Err(call.bad(&format!("at most {modes} exponents")));
    }
    a.resize(modes, 0);
    Ok((a, c))
}


const BASE_NAMES: &[&str] = &[
    "I", "E", "J0", "Jp", "Jm", "Jt0", "Jtp", "Jtm", "Cmeta", "Jpair0", "Jpairp", "Jpairm",
    "Jtpairp", "Jtpairm", "Cpair", "Jtot0", "Jtotp", "Jtotm", "Ctot", "j0", "jp", "jm", "j1",
    "j2", "j3", "j1r", "j2r", "L", "H", "L13p", "L13m", "L24p", "L24m", "L14p", "L14m", "C4",
    "C4p", "Mplus", "Mminus", "QHiggsRHS", "Tp", "Tm", "K1", "K2", "K3", "K3closed", "xi1",
    "xi2", "xi3", "xi4", "xi5", "xi6", "xi7", "rAW", "SK1", "SK2", "SK3", "Cs1", "Cs2",
];

/// Whether [`lookup`] recognizes `name` (arguments are not checked).
pub fn is_known(name: &str) -> bool {
    if BASE_NAMES.contains(&name) {
        return true;
    }
    if let Some(rest) = name.strip_prefix('A') {
        let (idx, kind) = rest.split_at(rest.len().saturating_sub(1));
        if mode_suffix(idx).is_some() && matches!(kind, "p" | "m" | "0") {
            return true;
        }
    }
    name.strip_prefix('N').and_then(mode_suffix).is_some()
}
