use super::*;
use crate::fock::{equal_on_interior, BasisState, Exact, Margin, ModeConfig, Outcome};
use crate::scalar::GaussianRational;

fn fock(modes: usize, cutoff: u32) -> Fock<Exact> {
    Fock::exact(ModeConfig::new(modes, cutoff).unwrap())
}

fn outcome(a: &Op<Scalar>, b: &Op<Scalar>) -> Outcome {
    let c = equal_on_interior(a, b, Margin::Auto).unwrap();
    if let Some(w) = &c.witness {
        eprintln!("witness at {} -> {}: {} vs {}", w.state, w.target, w.lhs, w.rhs);
    }
    c.outcome
}

#[track_caller]
fn same(a: &Op<Scalar>, b: &Op<Scalar>) {
    assert_eq!(outcome(a, b), Outcome::Pass);
}

fn r_int(n: i64) -> Rational {
    Rational::from_int(n)
}

fn su11_relations(r: &Realization<'_, Exact>, t: &Su11Triple<Scalar>) {
    same(&t.j0.commutator(&t.jplus).unwrap(), &t.jplus);
    same(&t.j0.commutator(&t.jminus).unwrap(), &t.jminus.neg());
    // J₋J₊ − q²J₊J₋ = q^{2J₀}[2J₀]_q
    let lhs = t
        .jminus
        .compose(&t.jplus)
        .unwrap()
        .sub(&r.scale(&Scalar::t_pow(8), &t.jplus.compose(&t.jminus).unwrap()).unwrap())
        .unwrap();
    let rhs = r
        .q_pow_form(&t.form, &r_int(2))
        .unwrap()
        .compose(&r.qbracket_form(&t.form, &r_int(2)).unwrap())
        .unwrap();
    same(&lhs, &rhs);
    let c = r.casimir_su11(t).unwrap();
    for g in [&t.j0, &t.jplus, &t.jminus] {
        same(&c.commutator(g).unwrap(), &r.fock.zero());
    }
}

#[test]
fn oscillator_relation() {
    let f = fock(1, 6);
    let r = Realization::new(&f);
    let (p, m) = (r.ap(1).unwrap(), r.am(1).unwrap());
    let lhs = m
        .compose(&p)
        .unwrap()
        .sub(&f.scale(&Scalar::q(), &p.compose(&m).unwrap()).unwrap())
        .unwrap();
    same(&lhs, &f.identity());
}

#[test]
fn metaplectic_triple() {
    let f = fock(1, 8);
    let r = Realization::new(&f);
    let t = r.metaplectic(1).unwrap();
    su11_relations(&r, &t);
    // (A⁺)²|1> = |3>, divided by q^{1/2} + q^{-1/2}
    let out = t.jplus.apply(&BasisState(vec![1])).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].0, BasisState(vec![3]));
    assert_eq!(out[0].1, two_half().inv().unwrap());
}

#[test]
fn metaplectic_casimir_is_constant() {
    let f = fock(1, 8);
    let r = Realization::new(&f);
    let c = r.casimir_su11(&r.metaplectic(1).unwrap()).unwrap();
    assert!(c.is_diagonal());
    let v0 = c.column(0)[0].1.clone();
    for j in 0..7 {
        assert_eq!(c.column(j)[0].1, v0);
    }
    assert_eq!(v0.limit_at_one().unwrap(), GaussianRational::ratio(3, 16).unwrap());
}

#[test]
fn pair_triple_matches_coproduct() {
    let f = fock(2, 6);
    let r = Realization::new(&f);
    let pair = r.su11_pair(1).unwrap();
    su11_relations(&r, &pair);
    let cp = r
        .coproduct(&r.metaplectic(1).unwrap(), &r.metaplectic(2).unwrap())
        .unwrap();
    same(&pair.j0, &cp.j0);
    same(&pair.jplus, &cp.jplus);
    same(&pair.jminus, &cp.jminus);
    assert_eq!(pair.form, cp.form);
}

#[test]
fn total_triple_relations() {
    let f = fock(4, 4);
    let r = Realization::new(&f);
    su11_relations(&r, &r.su11_total().unwrap());
}

#[test]
fn coproduct_rejects_overlap() {
    let f = fock(2, 3);
    let r = Realization::new(&f);
    let a = r.metaplectic(1).unwrap();
    assert!(matches!(r.coproduct(&a, &a), Err(FockError::InvalidConfig(_))));
}

#[test]
fn tilde_relations() {
    let f = fock(2, 6);
    let r = Realization::new(&f);
    let t = r.tilde_su11(&r.su11_pair(1).unwrap()).unwrap();
    let b = r.qbracket_form(&t.form, &r_int(2)).unwrap();
    same(&t.jminus.commutator(&t.jplus).unwrap(), &b);
}

#[test]
fn schwinger_action_and_relations() {
    let f = fock(2, 6);
    let r = Realization::new(&f);
    let s = r.schwinger_su11(1).unwrap();
    let out = s.jplus.apply(&BasisState(vec![0, 1])).unwrap();
    assert_eq!(out, vec![(BasisState(vec![1, 0]), Scalar::one())]);
    same(&s.j0.commutator(&s.jplus).unwrap(), &s.jplus);
    same(&s.j0.commutator(&s.jminus).unwrap(), &s.jminus.neg());
    // the commutator closes on [2j_0] in base q^{1/2}, not base q
    let e = 4 * 2;
    let half_base = f
        .diag_poly(|n| {
            Scalar::sym_bracket(Quarter(e * (n[0] as i64 - n[1] as i64) / 2), Quarter(2))
        })
        .unwrap();
    let comm = s.jplus.commutator(&s.jminus).unwrap();
    same(&comm, &half_base);
    let full_base = r.qbracket_form(&s.form, &r_int(2)).unwrap();
    assert_eq!(outcome(&comm, &full_base), Outcome::Fail);
}

#[test]
fn cartesian_forms_agree() {
    let f = fock(2, 5);
    let r = Realization::new(&f);
    let (j1, j2, j3) = r.cartesian_o3(1).unwrap();
    let (j1r, j2r) = r.cartesian_realized(1).unwrap();
    same(&j1, &j1r);
    same(&j2, &j2r);
    let qc = |a: &Op<Scalar>, b: &Op<Scalar>| f.q_commutator(a, b, Quarter(2)).unwrap();
    same(&qc(&j2, &j3), &j1);
    same(&qc(&j3, &j1), &j2);
}

#[test]
fn soq_l_action() {
    let f = fock(2, 4);
    let r = Realization::new(&f);
    let l = r.soq_l(1).unwrap();
    // |0,1> -> q^{1/4}·q^{1/4}|1,0>: A₂⁻ gives (1)_q = 1, prefactor at n₁ = 1 is t^{-2+1}
    let out = l.apply(&BasisState(vec![0, 1])).unwrap();
    assert_eq!(out, vec![(BasisState(vec![1, 0]), Scalar::one())]);
}

#[test]
fn soq4_relations() {
    let f = fock(4, 4);
    let r = Realization::new(&f);
    let (l12, l23, l34) = (r.soq_l(1).unwrap(), r.soq_l(2).unwrap(), r.soq_l(3).unwrap());
    same(&l12.commutator(&l34).unwrap(), &f.zero());
    // cubic relation with [2]_{q^{1/2}}
    let serre = |a: &Op<Scalar>, b: &Op<Scalar>| {
        let aa = a.compose(a).unwrap();
        aa.compose(b)
            .unwrap()
            .sub(&f.scale(&two_half(), &a.compose(b).unwrap().compose(a).unwrap()).unwrap())
            .unwrap()
            .add(&b.compose(&aa).unwrap())
            .unwrap()
    };
    same(&serre(&l12, &l23), &l23.neg());
    same(&serre(&l23, &l12), &l12.neg());
    same(&serre(&l23, &l34), &l34.neg());
    let (_, c4p) = r.casimirs_soq4().unwrap();
    same(&c4p, &f.zero());
}

#[test]
fn soq4_casimirs_are_central() {
    let f = fock(4, 5);
    let r = Realization::new(&f);
    let (c4, c4p) = r.casimirs_soq4().unwrap();
    for i in 1..=3 {
        let l = &r.soq_l(i).unwrap();
        same(&c4.commutator(l).unwrap(), &f.zero());
        same(&c4p.commutator(l).unwrap(), &f.zero());
    }
}

#[test]
fn qhiggs_commutator() {
    let f = fock(4, 4);
    let r = Realization::new(&f);
    let quad = r.qhiggs().unwrap();
    same(
        &quad.mplus.commutator(&quad.mminus).unwrap(),
        &r.qhiggs_rhs().unwrap(),
    );
    let four = Scalar::from_int(4);
    same(
        &quad.l.commutator(&quad.mplus).unwrap(),
        &f.scale(&four, &quad.mplus).unwrap(),
    );
    same(&quad.h.commutator(&quad.mminus).unwrap(), &f.zero());
    // M^± = [2]²_{q^{1/2}} J^±_{(12)} J^∓_{(34)}
    let (a, b) = (r.su11_pair(1).unwrap(), r.su11_pair(2).unwrap());
    let k = two_half().pow(2).unwrap();
    same(
        &quad.mplus,
        &f.scale(&k, &a.jplus.compose(&b.jminus).unwrap()).unwrap(),
    );
}

#[test]
fn askey_wilson_relations() {
    let f = fock(4, 4);
    let r = Realization::new(&f);
    let (a, b) = (r.su11_pair(1).unwrap(), r.su11_pair(2).unwrap());
    let aw = r.aw_k(&a, &b).unwrap();
    same(&aw.k3, &r.aw_k3_closed(&a, &b).unwrap());
    let [xi1, xi2, xi3, xi4, xi5, xi6, xi7] = &aw.xi;
    let (k1, k2, k3) = (&aw.k1, &aw.k2, &aw.k3);
    let c = |x: &Op<Scalar>, y: &Op<Scalar>| x.compose(y).unwrap();
    let rr = |x: Op<Scalar>| f.scale(&aw.r, &x).unwrap();
    let rhs_b = rr(c(&c(k2, k1), k2))
        .add(&c(xi1, &k1.anticommutator(k2).unwrap()))
        .unwrap()
        .add(&c(xi2, &c(k2, k2)))
        .unwrap()
        .add(&c(xi3, k2))
        .unwrap()
        .add(&c(xi4, k1))
        .unwrap()
        .add(xi5)
        .unwrap();
    same(&k2.commutator(k3).unwrap(), &rhs_b);
    let rhs_c = rr(c(&c(k1, k2), k1))
        .add(&c(xi1, &c(k1, k1)))
        .unwrap()
        .add(&c(xi2, &k1.anticommutator(k2).unwrap()))
        .unwrap()
        .add(&c(xi3, k1))
        .unwrap()
        .add(&c(xi6, k2))
        .unwrap()
        .add(xi7)
        .unwrap();
    same(&k3.commutator(k1).unwrap(), &rhs_c);
}

#[test]
fn script_forms_agree() {
    let f = fock(4, 4);
    let r = Realization::new(&f);
    let (a, b) = (r.su11_pair(1).unwrap(), r.su11_pair(2).unwrap());
    let aw = r.aw_k(&a, &b).unwrap();
    let (s1, s2, s3) = r.script_k().unwrap();
    same(&s1, &aw.k1);
    same(&s2, &aw.k2);
    same(&s3, &aw.k3);
    same(&r.script_casimir(1).unwrap(), &r.casimir_su11(&a).unwrap());
    same(&r.script_casimir(2).unwrap(), &r.casimir_su11(&b).unwrap());
}

#[test]
fn total_casimir_links() {
    let f = fock(4, 4);
    let r = Realization::new(&f);
    let (a, b) = (r.su11_pair(1).unwrap(), r.su11_pair(2).unwrap());
    let ct = r.casimir_su11(&r.su11_total().unwrap()).unwrap();
    let k2 = r.aw_k(&a, &b).unwrap().k2;
    same(&ct, &f.scale(&Scalar::from_int(2), &k2).unwrap());
    let (c4, _) = r.casimirs_soq4().unwrap();
    let opq2 = Scalar::one().add(&Scalar::q()).pow(2).unwrap();
    same(&c4, &f.scale(&opq2, &ct).unwrap());
}

#[test]
fn proof_identities_hold() {
    let f = fock(4, 4);
    let r = Realization::new(&f);
    for (label, lhs, rhs) in r.proof_lemmas().unwrap() {
        assert_eq!(outcome(&lhs, &rhs), Outcome::Pass, "{label}");
    }
}

#[test]
fn t_pm_prefactor() {
    let f = fock(2, 4);
    let r = Realization::new(&f);
    let (tp, _) = r.t_pm(Quarter(2)).unwrap();
    // |0,0> -> q^{1/2}(A₁⁺)² gives t^2 |2,0>, (A₂⁺)² gives |0,2>; prefactor t^{2·2}
    let out = tp.apply(&BasisState(vec![0, 0])).unwrap();
    assert_eq!(
        out,
        vec![
            (BasisState(vec![0, 2]), Scalar::t_pow(4)),
            (BasisState(vec![2, 0]), Scalar::t_pow(6)),
        ]
    );
}

#[test]
fn non_integral_power_is_rejected() {
    let f = fock(1, 3);
    let r = Realization::new(&f);
    let t = r.metaplectic(1).unwrap();
    assert!(r.q_pow_form(&t.form, &Rational::new(1, 8).unwrap()).is_err());
}

#[test]
fn names_resolve() {
    let f = fock(4, 2);
    let r = Realization::new(&f);
    let n = |x: i64| Arg::Num(r_int(x));
    let l = lookup(&r, "L", &[n(1), n(2)], &[]).unwrap();
    same(&l, &r.soq_l(1).unwrap());
    let e = lookup(
        &r,
        "E",
        &[],
        &[("a".into(), Arg::Tuple(vec![r_int(4)])), ("c".into(), Arg::Num(r_int(0)))],
    )
    .unwrap();
    same(&e, &f.diag_exp(&[4, 0, 0, 0], 0).unwrap());
    same(&lookup(&r, "A3p", &[], &[]).unwrap(), &r.ap(3).unwrap());
    assert!(matches!(lookup(&r, "Bogus", &[], &[]), Err(NameError::Unknown(_))));
    assert!(matches!(
        lookup(&r, "L", &[n(1), n(3)], &[]),
        Err(NameError::Arguments { .. })
    ));
    assert!(lookup(&r, "A7p", &[], &[]).is_err());
    for name in [
        "Jtot0", "Ctot", "C4", "C4p", "Mplus", "QHiggsRHS", "K1", "K3closed", "xi5", "xi7",
        "rAW", "SK2", "Cs2", "L14m", "H",
    ] {
        lookup(&r, name, &[], &[]).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
