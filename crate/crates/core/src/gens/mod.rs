//! Realized generators: every operator of the construction, built from
//! number-gauge q-oscillators on a caller-supplied space.
//!
//! Mode indices are 1-based; pair `p` means modes `(2p−1, 2p)`.

mod names;

use std::cell::RefCell;
use std::collections::HashMap;

use crate::fock::{Field, Fock, FockError, SparseOperator};
use crate::scalar::{Quarter, Rational, Scalar, ScalarError};

pub use names::{is_known, lookup, Arg, NameError, NAME_TABLE};

type Op<C> = SparseOperator<C>;
type R<T> = Result<T, FockError>;

/// `J_0` as an affine function of the occupations, so that `q^{kJ_0}` can be
/// built as an exact diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub weights: Vec<Rational>,
    pub offset: Rational,
}

impl LinearForm {
    fn single(modes: usize, i: usize, w: Rational, offset: Rational) -> Self {
        let mut weights = vec![Rational::ZERO; modes];
        weights[i - 1] = w;
        LinearForm { weights, offset }
    }

    pub fn eval(&self, n: &[u32]) -> Rational {
        self.weights
            .iter()
            .zip(n)
            .fold(self.offset.clone(), |acc, (w, &k)| {
                &acc + &(w * &Rational::from_int(k as i64))
            })
    }

    pub fn add(&self, other: &Self) -> Self {
        LinearForm {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a + b)
                .collect(),
            offset: &self.offset + &other.offset,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LinearForm {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a - b)
                .collect(),
            offset: &self.offset - &other.offset,
        }
    }

    /// `t`-exponent data of `q^{k·J}`: `(a_i, c)` with `4k·w_i`, `4k·w_0`.
    fn t_exponents(&self, k: &Rational) -> R<(Vec<i64>, i64)> {
        let four_k = &Rational::from_int(4) * k;
        let int = |r: Rational| -> R<i64> {
            match r {
                Rational::Small { num, den: 1 } => Ok(num),
                other => Err(FockError::Scalar(ScalarError::Domain(format!(
                    "q^({k}·J0) has non-integral t-exponent {other}"
                )))),
            }
        };
        let a = self
            .weights
            .iter()
            .map(|w| int(&four_k * w))
            .collect::<R<Vec<_>>>()?;
        Ok((a, int(&four_k * &self.offset)?))
    }
}

/// Generators `J_0, J_±` of one copy of the su(1,1) algebra.
#[derive(Clone, Debug)]
pub struct Su11Triple<C> {
    pub j0: Op<C>,
    pub jplus: Op<C>,
    pub jminus: Op<C>,
    pub form: LinearForm,
}

/// Askey–Wilson generators with the structure parameters.
#[derive(Clone, Debug)]
pub struct AwTriple<C> {
    pub k1: Op<C>,
    pub k2: Op<C>,
    pub k3: Op<C>,
    pub r: Scalar,
    /// `ξ_1 … ξ_7`; constant ones are scalar multiples of the identity.
    pub xi: [Op<C>; 7],
}

#[derive(Clone, Debug)]
pub struct QHiggsQuad<C> {
    pub mplus: Op<C>,
    pub mminus: Op<C>,
    pub l: Op<C>,
    pub h: Op<C>,
}

/// `[2]_{q^{1/2}} = q^{1/2} + q^{-1/2}`.
pub fn two_half() -> Scalar {
    Scalar::t_pow(2).add(&Scalar::t_pow(-2))
}

fn q() -> Scalar {
    Scalar::q()
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

/// Generator constructors over one space and coefficient lane.
pub struct Realization<'a, F: Field> {
    pub fock: &'a Fock<F>,
    /// Shared intermediates, keyed by kind and index.
    memo: RefCell<HashMap<(&'static str, usize), Vec<Op<F::C>>>>,
}

impl<'a, F: Field> Realization<'a, F> {
    pub fn new(fock: &'a Fock<F>) -> Self {
        Realization {
            fock,
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn memoized(
        &self,
        key: (&'static str, usize),
        build: impl FnOnce() -> R<Vec<Op<F::C>>>,
    ) -> R<Vec<Op<F::C>>> {
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = build()?;
        self.memo.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn modes(&self) -> usize {
        self.fock.config().modes()
    }

    fn need_modes(&self, m: usize, what: &str) -> R<()> {
        if self.modes() < m {
            return Err(FockError::InvalidConfig(format!(
                "{what} needs {m} modes, space has {}",
                self.modes()
            )));
        }
        Ok(())
    }

    fn pair_modes(&self, p: usize) -> R<(usize, usize)> {
        if p == 0 {
            return Err(FockError::ModeIndex {
                index: 0,
                modes: self.modes(),
            });
        }
        let (a, b) = (2 * p - 1, 2 * p);
        self.fock.config().check_mode(a)?;
        self.fock.config().check_mode(b)?;
        Ok((a, b))
    }

    // -- primitives -----------------------------------------------------

    pub fn identity(&self) -> Op<F::C> {
        self.fock.identity()
    }

    pub fn ap(&self, i: usize) -> R<Op<F::C>> {
        self.fock.osc_plus(i)
    }

    pub fn am(&self, i: usize) -> R<Op<F::C>> {
        self.fock.osc_minus(i)
    }

    /// `A_i⁰`.
    pub fn a0(&self, i: usize) -> R<Op<F::C>> {
        self.fock.config().check_mode(i)?;
        self.fock.diag_poly(|n| int(n[i - 1] as i64))
    }

    /// `N_i = (A_i⁰)_q`.
    pub fn number(&self, i: usize) -> R<Op<F::C>> {
        self.fock.config().check_mode(i)?;
        self.fock.diag_poly(|n| Scalar::qnum(n[i - 1] as i64))
    }

    /// `t^{Σ a_i n_i + c}` from sparse `(mode, a_i)` data.
    pub fn texp(&self, a: &[(usize, i64)], c: i64) -> R<Op<F::C>> {
        let mut v = vec![0; self.modes()];
        for &(i, ai) in a {
            self.fock.config().check_mode(i)?;
            v[i - 1] += ai;
        }
        self.fock.diag_exp(&v, c)
    }

    pub fn scale(&self, s: &Scalar, a: &Op<F::C>) -> R<Op<F::C>> {
        self.fock.scale(s, a)
    }

    fn sq(a: &Op<F::C>) -> R<Op<F::C>> {
        a.compose(a)
    }

    /// `E_{ij} = A_i⁺A_j⁻`.
    pub fn u4_bilinear(&self, i: usize, j: usize) -> R<Op<F::C>> {
        self.ap(i)?.compose(&self.am(j)?)
    }

    /// `q^{k·J}` for an affine form `J`.
    pub fn q_pow_form(&self, form: &LinearForm, k: &Rational) -> R<Op<F::C>> {
        let (a, c) = form.t_exponents(k)?;
        self.fock.diag_exp(&a, c)
    }

    /// `[k·J]_q` for an affine form `J`.
    pub fn qbracket_form(&self, form: &LinearForm, k: &Rational) -> R<Op<F::C>> {
        // validates integrality
        form.t_exponents(k)?;
        let four_k = &Rational::from_int(4) * k;
        self.fock.diag_poly(|n| {
            let e = &four_k * &form.eval(n);
            Scalar::sym_bracket(Quarter::from_rational(&(&e / &Rational::from_int(4))).unwrap(), Quarter(4))
        })
    }

    // -- su(1,1) ----------------------------------------------------------

    /// `𝒥_0 = ½(A⁰ + ½)`, `𝒥_± = (A^±)² / [2]_{q^{1/2}}`.
    pub fn metaplectic(&self, i: usize) -> R<Su11Triple<F::C>> {
        self.fock.config().check_mode(i)?;
        let form = LinearForm::single(
            self.modes(),
            i,
            Rational::new(1, 2).unwrap(),
            Rational::new(1, 4).unwrap(),
        );
        let inv = two_half().inv().unwrap();
        Ok(Su11Triple {
            j0: self.fock.diag_poly(|n| Scalar::constant(form.eval(n).into()))?,
            jplus: self.scale(&inv, &Self::sq(&self.ap(i)?)?)?,
            jminus: self.scale(&inv, &Self::sq(&self.am(i)?)?)?,
            form,
        })
    }

    /// Coproduct `Δ(J_0) = J_0⊗1 + 1⊗J_0`, `Δ(J_±) = J_±⊗q^{2J_0} + 1⊗J_±`
    /// of two triples acting on disjoint modes.
    pub fn coproduct(&self, a: &Su11Triple<F::C>, b: &Su11Triple<F::C>) -> R<Su11Triple<F::C>> {
        let overlap = a
            .form
            .weights
            .iter()
            .zip(&b.form.weights)
            .any(|(x, y)| !x.is_zero() && !y.is_zero());
        if overlap {
            return Err(FockError::InvalidConfig(
                "coproduct legs must act on disjoint modes".into(),
            ));
        }
        let q2b = self.q_pow_form(&b.form, &Rational::from_int(2))?;
        Ok(Su11Triple {
            j0: a.j0.add(&b.j0)?,
            jplus: a.jplus.compose(&q2b)?.add(&b.jplus)?,
            jminus: a.jminus.compose(&q2b)?.add(&b.jminus)?,
            form: a.form.add(&b.form),
        })
    }

    /// `q^{A_b⁰+1/2}(A_a^±)² + (A_b^±)²`, the two-mode factor shared by the
    /// pair generators, `M^±` and `T^±`.
    pub fn pair_factor(&self, a: usize, b: usize, raise: bool) -> R<Op<F::C>> {
        let (xa, xb) = if raise {
            (self.ap(a)?, self.ap(b)?)
        } else {
            (self.am(a)?, self.am(b)?)
        };
        let k = self.texp(&[(b, 4)], 2)?;
        k.compose(&Self::sq(&xa)?)?.add(&Self::sq(&xb)?)
    }

    /// Pairwise sum of two metaplectic copies on modes `(2p−1, 2p)`, in the
    /// closed form with `𝒥_0 = ½(A⁰_{2p−1} + A⁰_{2p} + 1)`.
    pub fn su11_pair(&self, p: usize) -> R<Su11Triple<F::C>> {
        let (a, b) = self.pair_modes(p)?;
        let half = Rational::new(1, 2).unwrap();
        let mut weights = vec![Rational::ZERO; self.modes()];
        weights[a - 1] = half.clone();
        weights[b - 1] = half.clone();
        let form = LinearForm {
            weights,
            offset: half,
        };
        let inv = two_half().inv().unwrap();
        Ok(Su11Triple {
            j0: self.fock.diag_poly(|n| Scalar::constant(form.eval(n).into()))?,
            jplus: self.scale(&inv, &self.pair_factor(a, b, true)?)?,
            jminus: self.scale(&inv, &self.pair_factor(a, b, false)?)?,
            form,
        })
    }

    /// `𝒥^{(1234)} = Δ(𝒥^{(12)}, 𝒥^{(34)})`.
    pub fn su11_total(&self) -> R<Su11Triple<F::C>> {
        self.need_modes(4, "the total su(1,1) triple")?;
        self.coproduct(&self.su11_pair(1)?, &self.su11_pair(2)?)
    }

    /// `C = J_+J_-q^{-2J_0+1} − q(q^{2J_0−1} + q^{−2J_0+1})/(q²−1)² + (q²+1)/(q²−1)²`.
    pub fn casimir_su11(&self, t: &Su11Triple<F::C>) -> R<Op<F::C>> {
        let q = q();
        let d = q.mul(&q).sub(&Scalar::one());
        let d2 = d.mul(&d);
        let qm2 = self.q_pow_form(&t.form, &Rational::from_int(-2))?;
        let qp2 = self.q_pow_form(&t.form, &Rational::from_int(2))?;
        let first = self.scale(&q, &t.jplus.compose(&t.jminus)?.compose(&qm2)?)?;
        let mid = self
            .scale(&q.inv().unwrap(), &qp2)?
            .add(&self.scale(&q, &qm2)?)?;
        let mid = self.scale(&q.div(&d2).unwrap(), &mid)?;
        let last = self
            .fock
            .constant(&q.mul(&q).add(&Scalar::one()).div(&d2).unwrap())?;
        first.sub(&mid)?.add(&last)
    }

    /// `J̃_0 = J_0`, `J̃_+ = J_+q^{−J_0}`, `J̃_− = q^{−J_0}J_−`.
    pub fn tilde_su11(&self, t: &Su11Triple<F::C>) -> R<Su11Triple<F::C>> {
        let qm = self.q_pow_form(&t.form, &Rational::from_int(-1))?;
        Ok(Su11Triple {
            j0: t.j0.clone(),
            jplus: t.jplus.compose(&qm)?,
            jminus: qm.compose(&t.jminus)?,
            form: t.form.clone(),
        })
    }

    // -- U_q(sl_2) and o_q(3) on two modes ----------------------------------

    /// `χ(j_0) = ½(A_a⁰ − A_b⁰)`, `χ(j_±) = q^{−(A_a⁰+A_b⁰−1)/4} A_a^± A_b^∓`.
    pub fn schwinger_su11(&self, p: usize) -> R<Su11Triple<F::C>> {
        let (a, b) = self.pair_modes(p)?;
        let half = Rational::new(1, 2).unwrap();
        let mut weights = vec![Rational::ZERO; self.modes()];
        weights[a - 1] = half.clone();
        weights[b - 1] = -&half;
        let form = LinearForm {
            weights,
            offset: Rational::ZERO,
        };
        let pre = self.texp(&[(a, -1), (b, -1)], 1)?;
        Ok(Su11Triple {
            j0: self.fock.diag_poly(|n| Scalar::constant(form.eval(n).into()))?,
            jplus: pre.compose(&self.ap(a)?.compose(&self.am(b)?)?)?,
            jminus: pre.compose(&self.am(a)?.compose(&self.ap(b)?)?)?,
            form,
        })
    }

    /// `g = 1/((q^{1/4}+q^{−1/4})(q^{1/2}+q^{−1/2}))`.
    pub fn cartesian_g() -> Scalar {
        Scalar::t_pow(1)
            .add(&Scalar::t_pow(-1))
            .mul(&two_half())
            .inv()
            .unwrap()
    }

    /// `j_1 = ig{q^{j_0/2}, j_+ + j_−}`, `j_2 = g{q^{−j_0/2}, j_+ − j_−}`,
    /// `j_3 = [j_1, j_2]_q` from the Schwinger triple.
    pub fn cartesian_o3(&self, p: usize) -> R<(Op<F::C>, Op<F::C>, Op<F::C>)> {
        let s = self.schwinger_su11(p)?;
        let g = Self::cartesian_g();
        let half = Rational::new(1, 2).unwrap();
        let qp = self.q_pow_form(&s.form, &half)?;
        let qm = self.q_pow_form(&s.form, &-&half)?;
        let j1 = self.scale(
            &Scalar::i().mul(&g),
            &qp.anticommutator(&s.jplus.add(&s.jminus)?)?,
        )?;
        let j2 = self.scale(&g, &qm.anticommutator(&s.jplus.sub(&s.jminus)?)?)?;
        let j3 = self.fock.q_commutator(&j1, &j2, Quarter(2))?;
        Ok((j1, j2, j3))
    }

    /// The expanded two-oscillator forms of `χ(j_1)` and `χ(j_2)`.
    pub fn cartesian_realized(&self, p: usize) -> R<(Op<F::C>, Op<F::C>)> {
        let (a, b) = self.pair_modes(p)?;
        let pre = Scalar::t_pow(1).div(&two_half()).unwrap();
        let up = self.ap(a)?.compose(&self.am(b)?)?;
        let down = self.am(a)?.compose(&self.ap(b)?)?;
        let t = Scalar::t_pow(1);
        let ti = Scalar::t_pow(-1);
        let j1 = self.texp(&[(b, -2)], 0)?.compose(
            &self
                .scale(&t, &down)?
                .add(&self.scale(&ti, &up)?)?,
        )?;
        let j2 = self.texp(&[(a, -2)], 0)?.compose(
            &self
                .scale(&t, &up)?
                .sub(&self.scale(&ti, &down)?)?,
        )?;
        Ok((self.scale(&Scalar::i().mul(&pre), &j1)?, self.scale(&pre, &j2)?))
    }

    // -- o_{q^{1/2}}(n) -------------------------------------------------------

    /// `𝓛_{i,i+1} = q^{−A_i⁰/2+1/4}(q^{1/4}A_i⁺A_{i+1}⁻ − q^{−1/4}A_i⁻A_{i+1}⁺)`.
    pub fn soq_l(&self, i: usize) -> R<Op<F::C>> {
        let mut v = self.memoized(("soq_l", i), || Ok(vec![self.build_soq_l(i)?]))?;
        Ok(v.pop().expect("one operator"))
    }

    fn build_soq_l(&self, i: usize) -> R<Op<F::C>> {
        self.fock.config().check_mode(i)?;
        self.fock.config().check_mode(i + 1)?;
        let up = self.ap(i)?.compose(&self.am(i + 1)?)?;
        let down = self.am(i)?.compose(&self.ap(i + 1)?)?;
        let body = self
            .scale(&Scalar::t_pow(1), &up)?
            .sub(&self.scale(&Scalar::t_pow(-1), &down)?)?;
        self.texp(&[(i, -2)], 1)?.compose(&body)
    }

    /// `(L13⁺, L13⁻, L24⁺, L24⁻, L14⁺, L14⁻)`, q-commutators with exponent
    /// `±1/4`.
    #[allow(clippy::type_complexity)]
    pub fn soq4_composites(
        &self,
    ) -> R<(Op<F::C>, Op<F::C>, Op<F::C>, Op<F::C>, Op<F::C>, Op<F::C>)> {
        self.need_modes(4, "o(4) composites")?;
        let v = self.memoized(("soq4_composites", 0), || {
            let (a, b, c, d, e, f) = self.build_soq4_composites()?;
            Ok(vec![a, b, c, d, e, f])
        })?;
        let mut it = v.into_iter();
        let mut next = || it.next().expect("six operators");
        Ok((next(), next(), next(), next(), next(), next()))
    }

    #[allow(clippy::type_complexity)]
    fn build_soq4_composites(
        &self,
    ) -> R<(Op<F::C>, Op<F::C>, Op<F::C>, Op<F::C>, Op<F::C>, Op<F::C>)> {
        let (l12, l23, l34) = (self.soq_l(1)?, self.soq_l(2)?, self.soq_l(3)?);
        let qc = |a: &Op<F::C>, b: &Op<F::C>, e: i64| self.fock.q_commutator(a, b, Quarter(e));
        let l13p = qc(&l12, &l23, 1)?;
        let l13m = qc(&l12, &l23, -1)?;
        let l24p = qc(&l23, &l34, 1)?;
        let l24m = qc(&l23, &l34, -1)?;
        let l14p = qc(&l13p, &l34, 1)?;
        let l14m = qc(&l13m, &l34, -1)?;
        Ok((l13p, l13m, l24p, l24m, l14p, l14m))
    }

    /// `(C_4, C_4′)` at deformation `q^{1/2}`.
    pub fn casimirs_soq4(&self) -> R<(Op<F::C>, Op<F::C>)> {
        let (l12, l23, l34) = (self.soq_l(1)?, self.soq_l(2)?, self.soq_l(3)?);
        let (l13p, l13m, l24p, l24m, l14p, l14m) = self.soq4_composites()?;
        let c4 = self
            .scale(&Scalar::t_pow(-4), &Self::sq(&l12)?)?
            .add(&Self::sq(&l23)?)?
            .add(&self.scale(&Scalar::t_pow(4), &Self::sq(&l34)?)?)?
            .add(&self.scale(&Scalar::t_pow(-2), &l13p.compose(&l13m)?)?)?
            .add(&self.scale(&Scalar::t_pow(2), &l24p.compose(&l24m)?)?)?
            .add(&l14p.compose(&l14m)?)?;
        let c4p = self
            .scale(&Scalar::t_pow(-2), &l12.compose(&l34)?)?
            .sub(&l13p.compose(&l24p)?)?
            .add(&self.scale(&Scalar::t_pow(2), &l23.compose(&l14p)?)?)?;
        Ok((c4, c4p))
    }

    // -- q-Higgs ------------------------------------------------------------

    /// `L = (A_1⁰+A_2⁰) − (A_3⁰+A_4⁰)`.
    pub fn higgs_l(&self) -> R<Op<F::C>> {
        self.need_modes(4, "L")?;
        self.fock
            .diag_poly(|n| int(n[0] as i64 + n[1] as i64 - n[2] as i64 - n[3] as i64))
    }

    /// `H = Σ (A_i⁰ + ½)` over the first four modes.
    pub fn higgs_h(&self) -> R<Op<F::C>> {
        self.need_modes(4, "H")?;
        self.fock
            .diag_poly(|n| int(n[..4].iter().map(|&k| k as i64).sum::<i64>() + 2))
    }

    pub fn qhiggs(&self) -> R<QHiggsQuad<F::C>> {
        self.need_modes(4, "the q-Higgs generators")?;
        Ok(QHiggsQuad {
            mplus: self
                .pair_factor(1, 2, true)?
                .compose(&self.pair_factor(3, 4, false)?)?,
            mminus: self
                .pair_factor(1, 2, false)?
                .compose(&self.pair_factor(3, 4, true)?)?,
            l: self.higgs_l()?,
            h: self.higgs_h()?,
        })
    }

    /// `q^{(x·H + y·L)/2}` as a diagonal.
    pub fn q_half_hl(&self, x: i64, y: i64) -> R<Op<F::C>> {
        self.need_modes(4, "q^H, q^L")?;
        // q^{H/2} = t^{2Σn+4}, q^{L/2} = t^{2(n1+n2−n3−n4)}
        self.texp(
            &[(1, 2 * x + 2 * y), (2, 2 * x + 2 * y), (3, 2 * x - 2 * y), (4, 2 * x - 2 * y)],
            4 * x,
        )
    }

    /// The cubic right-hand side of `[M⁺, M⁻]`.
    pub fn qhiggs_rhs(&self) -> R<Op<F::C>> {
        self.need_modes(4, "the q-Higgs right-hand side")?;
        let q = q();
        let one = Scalar::one();
        let omq = one.sub(&q);
        let l12sq = Self::sq(&self.soq_l(1)?)?;
        let l34sq = Self::sq(&self.soq_l(3)?)?;
        let qh = self.q_half_hl(2, 0)?;
        let qpq = q.add(&q.inv().unwrap());
        // (q+q⁻¹)(q^L − q^{−L}) − 2(q^{H/2} + q^{−H/2})(q^{L/2} − q^{−L/2})
        let inner1 = self
            .scale(&qpq, &self.q_half_hl(0, 2)?.sub(&self.q_half_hl(0, -2)?)?)?
            .sub(&self.scale(
                &int(2),
                &self
                    .q_half_hl(1, 0)?
                    .add(&self.q_half_hl(-1, 0)?)?
                    .compose(&self.q_half_hl(0, 1)?.sub(&self.q_half_hl(0, -1)?)?)?,
            )?)?;
        let c1 = one.add(&q).div(&q.mul(&omq.pow(3).unwrap())).unwrap();
        let term1 = self.scale(&c1, &qh.compose(&inner1)?)?;
        let a = self
            .q_half_hl(-1, 0)?
            .compose(&l12sq)?
            .add(&self.q_half_hl(1, 0)?.compose(&l34sq)?)?
            .compose(&self.q_half_hl(0, 1)?)?;
        let b = self
            .q_half_hl(1, 0)?
            .compose(&l12sq)?
            .add(&self.q_half_hl(-1, 0)?.compose(&l34sq)?)?
            .compose(&self.q_half_hl(0, -1)?)?;
        let c2 = one.add(&q).div(&q.mul(&q).mul(&omq)).unwrap();
        let term2 = self.scale(&c2, &qh.compose(&a.sub(&b)?)?)?;
        term1.add(&term2)
    }

    /// `T^± = q^{α(A_1⁰+A_2⁰)}(q^{A_2⁰+1/2}(A_1^±)² + (A_2^±)²)`.
    pub fn t_pm(&self, alpha: Quarter) -> R<(Op<F::C>, Op<F::C>)> {
        self.fock.config().check_mode(2)?;
        let pre = self.texp(&[(1, alpha.t_units()), (2, alpha.t_units())], 0)?;
        Ok((
            pre.compose(&self.pair_factor(1, 2, true)?)?,
            pre.compose(&self.pair_factor(1, 2, false)?)?,
        ))
    }

    // -- Askey–Wilson -------------------------------------------------------

    /// `K_1, K_2, K_3 = [K_1, K_2]` and the parameters, with tensor legs
    /// realized by the two triples.
    pub fn aw_k(&self, a: &Su11Triple<F::C>, b: &Su11Triple<F::C>) -> R<AwTriple<F::C>> {
        let (k1, k2) = self.aw_k12(a, b)?;
        let k3 = k1.commutator(&k2)?;
        let (r, xi) = self.aw_params(a, b)?;
        Ok(AwTriple { k1, k2, k3, r, xi })
    }

    fn aw_k12(&self, a: &Su11Triple<F::C>, b: &Su11Triple<F::C>) -> R<(Op<F::C>, Op<F::C>)> {
        let q = q();
        let one = Scalar::one();
        let r = |k: i64| Rational::from_int(k);
        let k1 = self.scale(
            &ratio(1, 4).div(&one.sub(&q)).unwrap(),
            &self.identity().sub(
                &self
                    .q_pow_form(&a.form, &r(1))?
                    .compose(&self.q_pow_form(&b.form, &r(-1))?)?,
            )?,
        )?;
        let c1 = self.casimir_su11(a)?;
        let c2 = self.casimir_su11(b)?;
        let qa_m2 = self.q_pow_form(&a.form, &r(-2))?;
        let qb_2 = self.q_pow_form(&b.form, &r(2))?;
        let d = q.mul(&q).sub(&one);
        let kappa = q.mul(&q).add(&one).div(&d.mul(&d)).unwrap();
        let tail = qa_m2
            .compose(&qb_2)?
            .sub(&qb_2)?
            .sub(&qa_m2)?
            .add(&self.identity())?;
        let sum = c1
            .compose(&qb_2)?
            .add(&qa_m2.compose(&c2)?)?
            .add(&self.scale(
                &q.inv().unwrap(),
                &a.jplus.compose(&qa_m2)?.compose(&b.jminus)?,
            )?)?
            .add(&self.scale(&q, &a.jminus.compose(&qa_m2)?.compose(&b.jplus)?)?)?
            .add(&self.scale(&kappa, &tail)?)?;
        let k2 = self.scale(&ratio(1, 2), &sum)?;
        Ok((k1, k2))
    }

    /// `K_3 = ⅛(1+q⁻¹)(J_+⊗J_− − J_−⊗J_+)(q^{−J_0}⊗q^{−J_0})`.
    pub fn aw_k3_closed(&self, a: &Su11Triple<F::C>, b: &Su11Triple<F::C>) -> R<Op<F::C>> {
        let q = q();
        let c = ratio(1, 8).mul(&Scalar::one().add(&q.inv().unwrap()));
        let m1 = Rational::from_int(-1);
        let body = a
            .jplus
            .compose(&b.jminus)?
            .sub(&a.jminus.compose(&b.jplus)?)?
            .compose(&self.q_pow_form(&a.form, &m1)?)?
            .compose(&self.q_pow_form(&b.form, &m1)?)?;
        self.scale(&c, &body)
    }

    /// `r` and `ξ_1 … ξ_7` for the realized Askey–Wilson relations.
    pub fn aw_params(
        &self,
        a: &Su11Triple<F::C>,
        b: &Su11Triple<F::C>,
    ) -> R<(Scalar, [Op<F::C>; 7])> {
        let q = q();
        let one = Scalar::one();
        let qi = q.inv().unwrap();
        let opq = one.add(&q);
        let r = q.sub(&qi).pow(2).unwrap().neg();
        let c1 = self.casimir_su11(a)?;
        let c2 = self.casimir_su11(b)?;
        let j12 = a.form.add(&b.form);
        let xi1 = one.add(&qi.mul(&qi)).div(&int(2)).unwrap();
        let xi2 = opq.pow(2).unwrap().mul(&one.sub(&q)).div(&int(4).mul(&q.mul(&q))).unwrap();
        let xi6 = opq.pow(2).unwrap().div(&int(16).mul(&q.mul(&q))).unwrap().neg();
        let k5 = opq
            .mul(&one.add(&q.mul(&q)))
            .div(&int(16).mul(&q.pow(3).unwrap()))
            .unwrap()
            .neg();
        let xi5 = self.scale(
            &k5,
            &c1.sub(&c2)?.compose(&self.qbracket_form(&j12, &Rational::ONE)?)?,
        )?;
        let half_bracket = self.qbracket_form(&j12, &Rational::new(1, 2).unwrap())?;
        let k7 = opq.pow(2).unwrap().div(&int(32).mul(&q.mul(&q))).unwrap();
        let xi7 = self.scale(
            &k7,
            &c1.compose(&self.q_pow_form(&j12, &Rational::ONE)?)?
                .add(&c2.compose(&self.q_pow_form(&j12, &Rational::from_int(-1))?)?)?
                .sub(&self.scale(&one.add(&qi.mul(&qi)), &Self::sq(&half_bracket)?)?)?,
        )?;
        let xi3 = self.scale(&int(4).mul(&q.sub(&one)), &xi7)?;
        Ok((
            r,
            [
                self.fock.constant(&xi1)?,
                self.fock.constant(&xi2)?,
                xi3,
                self.fock.zero(),
                xi5,
                self.fock.constant(&xi6)?,
                xi7,
            ],
        ))
    }

    /// `𝒦_1, 𝒦_2, 𝒦_3` in terms of `L`, `H`, `M^±` and the pair Casimirs.
    pub fn script_k(&self) -> R<(Op<F::C>, Op<F::C>, Op<F::C>)> {
        self.need_modes(4, "the script K generators")?;
        let q = q();
        let one = Scalar::one();
        let opq = one.add(&q);
        let omq = one.sub(&q);
        let k1 = self.scale(
            &ratio(1, 4).div(&omq).unwrap(),
            &self.identity().sub(&self.q_half_hl(0, 1)?)?,
        )?;
        let c1 = self.casimir_su11(&self.su11_pair(1)?)?;
        let c2 = self.casimir_su11(&self.su11_pair(2)?)?;
        let qhi = self.q_half_hl(-1, 0)?;
        let qli = self.q_half_hl(0, -1)?;
        let quad = self.qhiggs()?;
        // [(L±H)/4]_q: q^{(L+H)/4} = t^{2(n1+n2)+2}, q^{(L−H)/4} = t^{−2(n3+n4)−2}
        let bracket_lh = self
            .fock
            .diag_poly(|n| Scalar::sym_bracket(Quarter(2 * (n[0] + n[1]) as i64 + 2), Quarter(4)))?;
        let bracket_lmh = self.fock.diag_poly(|n| {
            Scalar::sym_bracket(Quarter(-2 * (n[2] + n[3]) as i64 - 2), Quarter(4))
        })?;
        let part1 = c1
            .compose(&self.q_half_hl(1, 0)?)?
            .add(&c2.compose(&qhi)?)?
            .compose(&qli)?;
        let part2 = self.scale(
            &one.add(&q.pow(-2).unwrap()),
            &qli.compose(&bracket_lh)?.compose(&bracket_lmh)?,
        )?;
        let part3 = self.scale(
            &q.div(&opq.pow(2).unwrap()).unwrap(),
            &self
                .scale(&q.inv().unwrap(), &quad.mplus)?
                .add(&self.scale(&q, &quad.mminus)?)?
                .compose(&self.q_half_hl(-1, -1)?)?,
        )?;
        let k2 = self.scale(&ratio(1, 2), &part1.add(&part2)?.add(&part3)?)?;
        let k3 = self.scale(
            &int(8).mul(&opq).inv().unwrap(),
            &quad.mplus.sub(&quad.mminus)?.compose(&qhi)?,
        )?;
        Ok((k1, k2, k3))
    }

    /// `𝒞^{(p)} = (𝓛² + 1)/(1+q)²` with `𝓛 = 𝓛_{12}` or `𝓛_{34}`.
    pub fn script_casimir(&self, p: usize) -> R<Op<F::C>> {
        let (a, _) = self.pair_modes(p)?;
        let l = self.soq_l(a)?;
        let s = Scalar::one().add(&q()).pow(-2).unwrap();
        self.scale(&s, &Self::sq(&l)?.add(&self.identity())?)
    }

    // -- intermediate identities of the q-Higgs commutator -------------------

    /// Intermediate identities of the `[M⁺, M⁻]` computation as
    /// `(label, lhs, rhs)`.
    pub fn proof_lemmas(&self) -> R<Vec<(String, Op<F::C>, Op<F::C>)>> {
        self.need_modes(4, "the proof identities")?;
        let q = q();
        let qi = q.inv().unwrap();
        let one = Scalar::one();
        let mut out = Vec::new();

        // [a₁⁺a₂⁻, a₁⁻a₂⁺] = [a₁⁺,a₁⁻]a₂⁺a₂⁻ − a₁⁺a₁⁻[a₂⁺,a₂⁻]
        let a1p = self.pair_factor(1, 2, true)?;
        let a1m = self.pair_factor(1, 2, false)?;
        let a2p = self.pair_factor(3, 4, true)?;
        let a2m = self.pair_factor(3, 4, false)?;
        let lhs = a1p.compose(&a2m)?.commutator(&a1m.compose(&a2p)?)?;
        let rhs = a1p
            .commutator(&a1m)?
            .compose(&a2p)?
            .compose(&a2m)?
            .sub(&a1p.compose(&a1m)?.compose(&a2p.commutator(&a2m)?)?)?;
        out.push(("commutator-of-products".to_string(), lhs, rhs));

        // 𝓛₁₂² = q^{−A₁⁰+½}(q(A₁⁺)²(A₂⁻)² + q⁻¹(A₁⁻)²(A₂⁺)² − q^{½}N₁ − q^{−½}N₂
        //        − q(q^{½}+q^{−½})N₁N₂)
        let l12 = self.soq_l(1)?;
        let (p1, m1) = (Self::sq(&self.ap(1)?)?, Self::sq(&self.am(1)?)?);
        let (p2, m2) = (Self::sq(&self.ap(2)?)?, Self::sq(&self.am(2)?)?);
        let (n1, n2) = (self.number(1)?, self.number(2)?);
        let body = self
            .scale(&q, &p1.compose(&m2)?)?
            .add(&self.scale(&qi, &m1.compose(&p2)?)?)?
            .sub(&self.scale(&Scalar::t_pow(2), &n1)?)?
            .sub(&self.scale(&Scalar::t_pow(-2), &n2)?)?
            .sub(&self.scale(&q.mul(&two_half()), &n1.compose(&n2)?)?)?;
        let rhs = self.texp(&[(1, -4)], 2)?.compose(&body)?;
        out.push(("l12-squared".to_string(), Self::sq(&l12)?, rhs));

        for i in 1..=4 {
            let (p, m) = (Self::sq(&self.ap(i)?)?, Self::sq(&self.am(i)?)?);
            let n = self.number(i)?;
            // [(A⁺)²,(A⁻)²] = −(1+q)q^{A⁰}((q+q⁻¹)N + 1)
            let rhs = self.scale(
                &one.add(&q).neg(),
                &self.texp(&[(i, 4)], 0)?.compose(
                    &self
                        .scale(&q.add(&qi), &n)?
                        .add(&self.identity())?,
                )?,
            )?;
            out.push((format!("square-commutator-{i}"), p.commutator(&m)?, rhs));
            // q(A⁺)²(A⁻)² = N² − N
            out.push((
                format!("square-product-{i}"),
                self.scale(&q, &p.compose(&m)?)?,
                Self::sq(&n)?.sub(&n)?,
            ));
        }

        // expanded product form of [M⁺, M⁻]
        let quad = self.qhiggs()?;
        let mpm = quad.mplus.commutator(&quad.mminus)?;
        let bracket = |a: usize, b: usize, comm: bool| -> R<Op<F::C>> {
            let (pa, ma) = (Self::sq(&self.ap(a)?)?, Self::sq(&self.am(a)?)?);
            let (pb, mb) = (Self::sq(&self.ap(b)?)?, Self::sq(&self.am(b)?)?);
            let cross = pa
                .compose(&mb)?
                .add(&self.scale(&q.pow(-2).unwrap(), &ma.compose(&pb)?)?)?;
            let kb2 = self.texp(&[(b, 8)], 4)?;
            let kb = self.texp(&[(b, 4)], 2)?;
            if comm {
                kb2.compose(&pa.commutator(&ma)?)?
                    .add(&pb.commutator(&mb)?)?
                    .add(&self.scale(&one.sub(&q.mul(&q)), &kb.compose(&cross)?)?)
            } else {
                kb2.compose(&pa.compose(&ma)?)?
                    .add(&pb.compose(&mb)?)?
                    .add(&kb.compose(&cross)?)
            }
        };
        let expanded = bracket(1, 2, true)?
            .compose(&bracket(3, 4, false)?)?
            .sub(&bracket(3, 4, true)?.compose(&bracket(1, 2, false)?)?)?;
        out.push(("expanded-commutator".to_string(), mpm.clone(), expanded));

        // final form in terms of 𝓛₁₂², 𝓛₃₄² and (A⁰₁+A⁰₂)_q
        let side = |a: usize, b: usize| -> R<(Op<F::C>, Op<F::C>)> {
            let lsq = Self::sq(&self.soq_l(a)?)?;
            let s = self.texp(&[(a, 4), (b, 4)], 0)?;
            let sm = self.texp(&[(a, 4), (b, 4)], -4)?;
            let nsum = self
                .fock
                .diag_poly(|n| Scalar::qnum(n[a - 1] as i64 + n[b - 1] as i64))?;
            let left = self.scale(
                &one.add(&q),
                &sm.compose(
                    &self.scale(&one.sub(&q), &lsq)?.add(
                        &self.scale(
                            &q.div(&one.sub(&q)).unwrap(),
                            &self
                                .scale(&one.add(&q.mul(&q)), &s)?
                                .sub(&self.scale(&int(2), &self.identity())?)?,
                        )?,
                    )?,
                )?,
            )?;
            let right = sm.compose(&lsq)?.add(&Self::sq(&nsum)?)?;
            Ok((left, right))
        };
        let (l12f, r12f) = side(1, 2)?;
        let (l34f, r34f) = side(3, 4)?;
        let fin = l12f.compose(&r34f)?.sub(&l34f.compose(&r12f)?)?;
        out.push(("final-form".to_string(), mpm, fin));
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
