//! Property tests over randomly generated groupoids and the structures built
//! from them.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dgk_core::diagonal::{is_fusion, pair_model, roundtrip_diagram, roundtrip_slim, square_of_diagram, Diagram, FactorizationDiagram};
use dgk_core::double::{coarse, corner_facts, frame, has_filling, transitivity, validate_double, BoxId, DoubleGroupoid};
use dgk_core::extension::{build_extension, decompose, psi_check, validate_cocycle_equations, CocyclePair, ExtensionData};
use dgk_core::fixtures;
use dgk_core::format::{emit_double, load_double};
use dgk_core::groupoid::{
    components, coset_count, isotropy, orbit_count_identity, validate_action, validate_groupoid, AbelianGroupBundle,
    ArrowId, BundleAction, ElemId, FiniteGroupoid, GroupoidMorphism, ObjectId,
};
use dgk_core::iso::{check_double_morphism, identity_edges};
use dgk_core::kernel::{core, core_action, corner_formula, orbit_is_ur};
use dgk_core::words::{FreeProduct, ReducedWord};

/// Objects `0..n` split into consecutive blocks; each block is a pair
/// groupoid times ℤ/k. Arrow `(p, q, s)` is numbered in that order.
fn block_groupoid(n: usize, cuts: &[bool], orders: &[usize]) -> FiniteGroupoid {
    let mut block = vec![0usize; n];
    for p in 1..n {
        block[p] = block[p - 1] + usize::from(cuts[p - 1]);
    }
    let mut arrows = Vec::new();
    let mut key = Vec::new();
    for p in 0..n {
        for q in (0..n).filter(|&q| block[q] == block[p]) {
            for s in 0..orders[block[p]] {
                arrows.push((ObjectId(p), ObjectId(q)));
                key.push((p, q, s));
            }
        }
    }
    let index = |p: usize, q: usize, s: usize| key.iter().position(|&k| k == (p, q, s)).unwrap();
    FiniteGroupoid::generate(n, arrows, |a, b| {
        let ((p, _, s), (_, r, t)) = (key[a.0], key[b.0]);
        ArrowId(index(p, r, (s + t) % orders[block[p]]))
    })
    .unwrap()
}

fn groupoid_with(n: usize, max_order: usize) -> impl Strategy<Value = FiniteGroupoid> {
    (prop::collection::vec(any::<bool>(), n.saturating_sub(1)), prop::collection::vec(1usize..=max_order, n))
        .prop_map(move |(cuts, orders)| block_groupoid(n, &cuts, &orders))
}

fn groupoid(n: usize) -> impl Strategy<Value = FiniteGroupoid> {
    groupoid_with(n, 3)
}

fn edge_pair() -> impl Strategy<Value = (FiniteGroupoid, FiniteGroupoid)> {
    (1usize..=2).prop_flat_map(|n| (groupoid_with(n, 2), groupoid_with(n, 2)))
}

fn identity_diagram(g: &FiniteGroupoid) -> Diagram {
    let id = GroupoidMorphism::new(g.arrows().collect());
    Diagram {
        d: g.clone(),
        h: g.clone(),
        v: g.clone(),
        i: id.clone(),
        j: id,
    }
}

/// Constant ℤ/m over the coarse pair groupoid on `n` objects. Arrows act by
/// the sign `eps(p) eps(q)`, and the cocycles are coboundaries of `phi`.
fn coboundary_extension(n: usize, m: usize, eps: &[bool], phi: &[usize]) -> ExtensionData {
    let p = FiniteGroupoid::pair(n);
    let frame = coarse(&p, &p).unwrap();
    let k = AbelianGroupBundle::constant_cyclic(n, m);
    let act = |g: ArrowId, e: ElemId| {
        let r = e.0 % m;
        let flip = eps[p.src(g).0] != eps[p.tgt(g).0];
        k.fiber(p.src(g))[if flip { (m - r) % m } else { r }]
    };
    let vact = BundleAction::from_fn(p.clone(), k.projection().to_vec(), act);
    let hact = vact.clone();
    let is_unit = |f: BoxId| {
        (frame.h().is_identity(frame.t(f)) && frame.h().is_identity(frame.b(f)))
            || (frame.v().is_identity(frame.l(f)) && frame.v().is_identity(frame.r(f)))
    };
    let phi = |f: BoxId| k.fiber(frame.bl(f))[if is_unit(f) { 0 } else { phi[f.0] % m }];
    let add = |a, b| k.add(a, b).unwrap();
    let mut cocycles = CocyclePair::default();
    for (f, g, fg) in frame.hcompose_entries() {
        let t = add(add(phi(f), hact.act(frame.b(f), phi(g)).unwrap()), k.neg(phi(fg)));
        cocycles.tau.insert((f, g), t);
    }
    for (f, g, fg) in frame.vcompose_entries() {
        let lg = frame.v().inverse(frame.l(g));
        let s = add(add(vact.act(lg, phi(f)).unwrap(), phi(g)), k.neg(phi(fg)));
        cocycles.sigma.insert((f, g), s);
    }
    ExtensionData {
        bundle: k,
        frame,
        vact,
        hact,
        cocycles,
    }
}

fn rebuild_witness(d: &DoubleGroupoid) -> bool {
    let dec = decompose(d).unwrap();
    if !validate_cocycle_equations(&dec.data).passed() || !psi_check(d, &dec).unwrap().passed() {
        return false;
    }
    let built = build_extension(&dec.data).unwrap();
    check_double_morphism(&built, d, &identity_edges(&built, dec.psi(d).unwrap())).passed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_groupoids_are_valid(g in (1usize..=4).prop_flat_map(groupoid)) {
        prop_assert!(validate_groupoid(&g).passed());
        let blocks = components(&g);
        prop_assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), g.objects());
        for q in g.object_ids() {
            // the cyclic subgroup of each vertex element
            for a in g.vertex_group(q) {
                let mut k = vec![g.identity(q)];
                let mut x = a;
                while !g.is_identity(x) {
                    k.push(x);
                    x = g.compose(x, a).unwrap();
                }
                k.sort();
                coset_count(&g, q, &k).unwrap();
            }
        }
    }

    #[test]
    fn coarse_double_groupoids_are_valid_and_slim((v, h) in edge_pair()) {
        let d = coarse(&v, &h).unwrap();
        prop_assert!(validate_double(&d).passed());
        prop_assert!(d.is_slim());
        prop_assert_eq!(&frame(&d).unwrap(), &d);
        prop_assert!(corner_facts(&d).passed());
        prop_assert!(corner_formula(&d).unwrap().passed());
        prop_assert!(orbit_is_ur(&d).unwrap().passed());
        let c = core(&d).unwrap();
        prop_assert!(validate_groupoid(&c.groupoid).passed());
        let act = core_action(&d, &c).unwrap();
        prop_assert!(validate_action(&act).passed());
        for a in d.boxes().step_by(3) {
            let e = ElemId(a.0);
            prop_assert!(orbit_count_identity(&act, e).passed());
            prop_assert!(!isotropy(&act, e).is_empty());
        }
        prop_assert!(rebuild_witness(&d));
        let text = emit_double(&d);
        prop_assert_eq!(emit_double(&load_double(&text, true).unwrap()), text);
    }

    #[test]
    fn frame_inherits_filling_and_transitivity(seed in 0u64..1000) {
        // extensions over the coarse pair groupoid keep their frame's flags
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi: Vec<usize> = (0..16).map(|_| rand::Rng::gen_range(&mut rng, 0..3)).collect();
        let d = build_extension(&coboundary_extension(2, 3, &[false, true], &phi)).unwrap();
        let f = frame(&d).unwrap();
        prop_assert!(f.is_slim());
        prop_assert!(validate_double(&f).passed());
        prop_assert_eq!(has_filling(&d), has_filling(&f));
        prop_assert_eq!(transitivity(&d), transitivity(&f));
    }

    #[test]
    fn coboundary_extensions_round_trip(
        n in 1usize..=2,
        m in 2usize..=4,
        eps in prop::collection::vec(any::<bool>(), 2),
        phi in prop::collection::vec(0usize..4, 16),
    ) {
        let data = coboundary_extension(n, m, &eps, &phi);
        prop_assert!(validate_cocycle_equations(&data).passed());
        let d = build_extension(&data).unwrap();
        prop_assert_eq!(d.len(), m * data.frame.len());
        prop_assert!(validate_double(&d).passed());
        prop_assert!(rebuild_witness(&d));
        let (fusion, report) = is_fusion(&d).unwrap();
        prop_assert!(report.passed());
        prop_assert!(!fusion);
    }

    #[test]
    fn mutations_are_detected(seed in 0u64..10_000) {
        for (name, d) in fixtures::all() {
            for m in fixtures::mutations(&d, 3, seed) {
                let dm = DoubleGroupoid::from_parts(m.parts).unwrap();
                prop_assert!(!validate_double(&dm).passed(), "{}: {}", name, m.description);
            }
        }
    }

    #[test]
    fn reduction_is_confluent_and_a_groupoid(seed in any::<u64>(), len in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, d) in fixtures::all() {
            let fp = FreeProduct::of(&d);
            let start = ObjectId(rand::Rng::gen_range(&mut rng, 0..d.base()));
            let path = fp.random_path(start, len, &mut rng);
            let w = fp.reduce(&path).unwrap();
            prop_assert!(fp.is_reduced(&w));
            prop_assert_eq!(&fp.reduce(&w.as_path()).unwrap(), &w);
            for _ in 0..5 {
                prop_assert_eq!(&fp.reduce_with_schedule(&path, &mut rng).unwrap(), &w);
            }
            let inv = fp.inverse(&w);
            prop_assert_eq!(fp.concat(&w, &inv).unwrap(), ReducedWord::base(start));
            let end = fp.end(&w);
            let u = fp.reduce(&fp.random_path(end, len, &mut rng)).unwrap();
            let v = fp.reduce(&fp.random_path(fp.end(&u), len, &mut rng)).unwrap();
            let left = fp.concat(&fp.concat(&w, &u).unwrap(), &v).unwrap();
            let right = fp.concat(&w, &fp.concat(&u, &v).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn squares_of_groupoids_round_trip(g in (1usize..=2).prop_flat_map(groupoid)) {
        let dg = identity_diagram(&g);
        let sq = square_of_diagram(&dg).unwrap();
        prop_assert!(validate_double(&sq).passed());
        prop_assert!(sq.is_slim() && has_filling(&sq));
        let pm = pair_model(&sq).unwrap();
        prop_assert!(pm.report.passed());
        prop_assert!(roundtrip_slim(&sq).unwrap().passed());
        let fd = FactorizationDiagram::verify(dg).unwrap();
        prop_assert!(roundtrip_diagram(&fd).unwrap().passed());
        let (_, report) = is_fusion(&sq).unwrap();
        prop_assert!(report.passed());
    }
}
