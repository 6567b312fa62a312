use proptest::prelude::*;
use qhiggs_core::fock::{equal_on_interior, AtPoint, Field, Fock, Margin, ModeConfig, Outcome, SparseOperator};
use qhiggs_core::scalar::{GaussianRational, Scalar};

const MODES: usize = 2;

#[derive(Clone, Debug)]
enum Letter {
    Plus(usize),
    Minus(usize),
    Diag([i64; MODES], i64),
}

/// A scaled product of oscillators and diagonals.
#[derive(Clone, Debug)]
struct Word {
    coeff: (i64, i64),
    letters: Vec<Letter>,
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        (1..=MODES).prop_map(Letter::Plus),
        (1..=MODES).prop_map(Letter::Minus),
        ([-3i64..=3, -3i64..=3], -4i64..=4).prop_map(|(a, c)| Letter::Diag(a, c)),
    ]
}

fn word() -> impl Strategy<Value = Word> {
    ((-4i64..=4, 1i64..=3), prop::collection::vec(letter(), 0..4))
        .prop_map(|(coeff, letters)| Word { coeff, letters })
}

fn build<F: Field>(fock: &Fock<F>, w: &Word) -> SparseOperator<F::C> {
    let mut op = fock.identity();
    for l in &w.letters {
        let g = match l {
            Letter::Plus(i) => fock.osc_plus(*i),
            Letter::Minus(i) => fock.osc_minus(*i),
            Letter::Diag(a, c) => fock.diag_exp(a, *c),
        }
        .unwrap();
        op = op.compose(&g).unwrap();
    }
    fock.scale(&Scalar::ratio(w.coeff.0, w.coeff.1), &op).unwrap()
}

fn fock(cutoff: u32) -> Fock {
    Fock::exact(ModeConfig::new(MODES, cutoff).unwrap())
}

fn agree(a: &SparseOperator, b: &SparseOperator) -> Result<(), TestCaseError> {
    let cmp = equal_on_interior(a, b, Margin::Fixed(0)).unwrap();
    prop_assert!(cmp.outcome != Outcome::Fail, "witness {:?}", cmp.witness);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_is_associative(a in word(), b in word(), c in word()) {
        let f = fock(4);
        let (a, b, c) = (build(&f, &a), build(&f, &b), build(&f, &c));
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        agree(&left, &right)?;
    }

    #[test]
    fn composition_distributes(a in word(), b in word(), c in word()) {
        let f = fock(4);
        let (a, b, c) = (build(&f, &a), build(&f, &b), build(&f, &c));
        let left = a.compose(&b.add(&c).unwrap()).unwrap();
        let right = a.compose(&b).unwrap().add(&a.compose(&c).unwrap()).unwrap();
        agree(&left, &right)?;
        let left = b.add(&c).unwrap().compose(&a).unwrap();
        let right = b.compose(&a).unwrap().add(&c.compose(&a).unwrap()).unwrap();
        agree(&left, &right)?;
    }

    #[test]
    fn jacobi_identity(a in word(), b in word(), c in word()) {
        let f = fock(4);
        let (a, b, c) = (build(&f, &a), build(&f, &b), build(&f, &c));
        let cyc = |x: &SparseOperator, y: &SparseOperator, z: &SparseOperator| {
            x.commutator(&y.commutator(z).unwrap()).unwrap()
        };
        let sum = cyc(&a, &b, &c)
            .add(&cyc(&b, &c, &a)).unwrap()
            .add(&cyc(&c, &a, &b)).unwrap();
        agree(&sum, &f.zero())?;
    }

    /// Untainted columns are unchanged when the cutoff grows.
    #[test]
    fn taint_is_sound(w in prop::collection::vec(word(), 1..3)) {
        let (small, large) = (fock(3), fock(6));
        let sum = |f: &Fock| {
            w.iter().fold(f.zero(), |acc, x| acc.add(&build(f, x)).unwrap())
        };
        let (a, b) = (sum(&small), sum(&large));
        for (j, state) in small.config().states() {
            if a.is_tainted(j) {
                continue;
            }
            prop_assert_eq!(a.apply(&state).unwrap(), b.apply(&state).unwrap(), "column {}", state);
        }
    }

    #[test]
    fn point_lane_is_evaluation(w in word(), v in word(), num in 2i64..=40, den in 2i64..=40) {
        prop_assume!(num != den);
        let t0 = GaussianRational::ratio(num, den).unwrap();
        let cfg = ModeConfig::new(MODES, 4).unwrap();
        let ex = Fock::exact(cfg);
        let pt = Fock::new(cfg, AtPoint::new(t0.clone()).unwrap());
        let x = build(&ex, &w).commutator(&build(&ex, &v)).unwrap();
        let y = build(&pt, &w).commutator(&build(&pt, &v)).unwrap();
        for j in 0..cfg.dim() {
            if x.is_tainted(j) || y.is_tainted(j) {
                continue;
            }
            let vx: Vec<_> = x
                .column(j)
                .iter()
                .map(|(k, c)| (*k, c.eval_at(&t0).unwrap()))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let vy: Vec<_> = y.column(j).iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
            prop_assert_eq!(vx, vy);
        }
    }
}
