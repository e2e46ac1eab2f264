use netcone_core::chambers::{
    flop, initial_chamber, nefify_with, random_walk, FiberId, Slot, TieBreak,
};
use netcone_core::cone::lp::{LinearProgram, LpOutcome, Relation};
use netcone_core::mw::{act_curve, compose_check};
use netcone_core::verifier::{build_k0, sample_movable, K0Cone};
use netcone_core::{
    act, normalize_to_pi, pair, parse_class, transvection, Cone, CurveClass, DivisorClass,
    MWElement, NamedClass, NetConfig, Rational,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn divisor(b: i64) -> impl Strategy<Value = DivisorClass> {
    (-b..=b, prop::array::uniform8(-b..=b)).prop_map(|(a, c)| DivisorClass::from_ints(a, c))
}

fn curve(b: i64) -> impl Strategy<Value = CurveClass> {
    (-b..=b, prop::array::uniform8(-b..=b)).prop_map(|(e, d)| CurveClass::from_ints(e, d))
}

fn mw(b: i64) -> impl Strategy<Value = MWElement> {
    prop::array::uniform7(-b..=b).prop_map(MWElement::new)
}

/// `x·x·f`, written out from the triple product directly.
fn q(x: &DivisorClass) -> Rational {
    netcone_core::triple(x, x, &DivisorClass::anti_half_canonical())
}

fn k0() -> &'static K0Cone {
    static K0: OnceLock<K0Cone> = OnceLock::new();
    K0.get_or_init(|| build_k0(&NetConfig::generic()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mw_preserves_fibre_form_and_degree(x in divisor(20), y in mw(10)) {
        let image = act(&y, &x);
        let fiber = CurveClass::fiber();
        prop_assert_eq!(q(&image), q(&x));
        prop_assert_eq!(pair(&image, &fiber), pair(&x, &fiber));
        prop_assert_eq!(act(&y, &DivisorClass::anti_half_canonical()), DivisorClass::anti_half_canonical());
    }

    #[test]
    fn mw_group_law(y1 in mw(6), y2 in mw(6), x in divisor(10)) {
        prop_assert!(compose_check(&y1, &y2));
        prop_assert_eq!(act(&y1, &act(&y2, &x)), act(&(y1 + y2), &x));
        prop_assert_eq!(act(&-y1, &act(&y1, &x)), x);
    }

    #[test]
    fn transvection_matrix_agrees_with_action(y in mw(6), x in divisor(10)) {
        prop_assert_eq!(transvection(&y).apply(&x), act(&y, &x));
    }

    #[test]
    fn contragredient_preserves_pairing(y in mw(5), x in divisor(10), g in curve(10)) {
        prop_assert_eq!(pair(&act(&y, &x), &act_curve(&y, &g)), pair(&x, &g));
    }

    #[test]
    fn canonical_degree_is_even(g in curve(200)) {
        let k = pair(&DivisorClass::canonical(), &g);
        prop_assert!((k.to_integer() % BigInt::from(2)).is_zero());
    }

    #[test]
    fn normalize_is_idempotent(x in divisor(30)) {
        prop_assume!(pair(&x, &CurveClass::fiber()).is_positive());
        let (_, once) = normalize_to_pi(&x).unwrap();
        let (y, twice) = normalize_to_pi(&once).unwrap();
        prop_assert!(y.is_zero());
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn display_round_trips(x in divisor(30), g in curve(30)) {
        prop_assume!(!x.is_zero() && !g.is_zero());
        let cfg = NetConfig::generic();
        prop_assert_eq!(parse_class(&x.to_string(), &cfg).unwrap(), NamedClass::Divisor(x.clone()));
        prop_assert_eq!(parse_class(&g.to_string(), &cfg).unwrap(), NamedClass::Curve(g.clone()));
        let half = x.scale(&Rational::new(1.into(), 2.into()));
        prop_assert_eq!(parse_class(&half.to_string(), &cfg).unwrap(), NamedClass::Divisor(half));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flops_are_involutions_and_conserve_fibres(seed in any::<u64>(), len in 0usize..8, k in 0usize..28, line in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_walk(&mut rng, len);
        let id = FiberId::all()[k];
        let slot = if line { Slot::Line } else { Slot::Residual };
        let t = flop(&s, id, slot);
        prop_assert_eq!(flop(&t, id, slot).key(), s.key());
        for state in [&s, &t] {
            for f in state.fibers() {
                prop_assert_eq!(&f.line_slot + &f.residual_slot, CurveClass::fiber());
            }
        }
    }

    #[test]
    fn nefify_ignores_tie_breaking(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = sample_movable(&mut rng, 20);
        let cfg = NetConfig::generic();
        let a = nefify_with(&d, &cfg, 10_000, TieBreak::Lexicographic);
        let b = nefify_with(&d, &cfg, 10_000, TieBreak::ReverseLexicographic);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.state.key(), b.state.key()),
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|o| o.word.len()), b.map(|o| o.word.len())),
        }
    }

    #[test]
    fn k0_shift_matches_generator_lp(picks in prop::collection::vec((0usize..128, 0i64..5), 1..5), t0 in -6i64..6, noise in divisor(2), noisy in any::<bool>()) {
        let k0 = k0();
        let f = DivisorClass::anti_half_canonical();
        let mut d = f.scale(&Rational::from_integer((-t0).into()));
        for (i, c) in &picks {
            d = &d + &(*c * &k0.vertices[*i].v);
        }
        if noisy {
            d = &d + &noise;
        }
        prop_assert_eq!(k0.min_shift(&d), lp_min_shift(k0, &d));
    }

    #[test]
    fn cone_double_dual(gens in prop::collection::vec(prop::array::uniform4(-3i64..=3), 1..7)) {
        let gens: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let c = Cone::from_int_generators(&gens, 4).unwrap();
        prop_assert_eq!(c.dual().dual(), c.clone());
        for g in &gens {
            prop_assert!(c.contains_int(g));
        }
    }
}

/// Least `t` with `D + t·f = Σ λ_g g`, `λ ≥ 0`, over the generators of K₀.
fn lp_min_shift(k0: &K0Cone, d: &DivisorClass) -> Option<Rational> {
    let gens = k0.cone.generators();
    let f = DivisorClass::anti_half_canonical().coords();
    let x = d.coords();
    let n = gens.len() + 1;
    let mut lp = LinearProgram::new(n);
    lp.set_free(0);
    let mut obj = vec![Rational::zero(); n];
    obj[0] = Rational::from_integer(1.into());
    lp.set_objective(obj);
    for r in 0..9 {
        let mut row = vec![-f[r].clone()];
        row.extend(gens.iter().map(|g| Rational::from_integer(g[r].clone())));
        lp.add(row, Relation::Eq, x[r].clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => panic!("f is not in the lineality of K0"),
    }
}

#[test]
fn initial_chamber_has_no_residual_walls() {
    // flopping a residual slot of the initial chamber leaves a curve cone
    // containing a line
    let s = initial_chamber(&NetConfig::generic()).unwrap();
    for id in FiberId::all() {
        let t = flop(&s, id, Slot::Residual);
        assert!(!netcone_core::chambers::is_full_dimensional(&t), "{id}");
        assert!(netcone_core::chambers::is_full_dimensional(&flop(&s, id, Slot::Line)));
    }
}
