//! Small double groupoids, extension data and diagrams used as a test corpus
//! and emitted by the command line tool.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagonal::{square_of_diagram, Diagram};
use crate::double::{coarse, BoxId, DoubleGroupoid, DoubleParts};
use crate::extension::{build_extension, CocyclePair, ExtensionData};
use crate::groupoid::{AbelianGroupBundle, ArrowId, BundleAction, ElemId, FiniteGroupoid, GroupoidMorphism};

/// Multiplication table of S3 on permutations of {0,1,2} in lexicographic
/// order; `p` then `q` sends `i` to `q[p[i]]`.
pub fn s3_table() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    perms
        .iter()
        .map(|p| perms.iter().map(|q| idx([q[p[0]], q[p[1]], q[p[2]]])).collect())
        .collect()
}

pub fn s3() -> FiniteGroupoid {
    FiniteGroupoid::from_group_table(&s3_table()).expect("S3 table")
}

/// One box over one object.
pub fn trivial() -> DoubleGroupoid {
    let one = FiniteGroupoid::discrete(1);
    coarse(&one, &one).expect("trivial double groupoid")
}

/// The double group of order two: trivial edges, boxes Θ and κ with κκ = Θ
/// both ways.
pub fn a2() -> DoubleGroupoid {
    let one = FiniteGroupoid::discrete(1);
    let (th, ka) = (BoxId(0), BoxId(1));
    let table = vec![(th, th, th), (th, ka, ka), (ka, th, ka), (ka, ka, th)];
    DoubleGroupoid::from_parts(DoubleParts {
        base: 1,
        h: one.clone(),
        v: one,
        boxes: 2,
        t: vec![ArrowId(0); 2],
        b: vec![ArrowId(0); 2],
        l: vec![ArrowId(0); 2],
        r: vec![ArrowId(0); 2],
        hcompose: table.clone(),
        vcompose: table,
        hid: vec![th],
        vid: vec![th],
        hinv: vec![th, ka],
        vinv: vec![th, ka],
    })
    .expect("A2 tables")
}

pub fn cpair(n: usize) -> DoubleGroupoid {
    let p = FiniteGroupoid::pair(n);
    coarse(&p, &p).expect("coarse pair groupoid")
}

pub fn cpair2() -> DoubleGroupoid {
    cpair(2)
}

pub fn cpair3() -> DoubleGroupoid {
    cpair(3)
}

/// The square of S3 = C3·C2.
pub fn s3f() -> DoubleGroupoid {
    square_of_diagram(&s3_diagram()).expect("square of S3")
}

/// Constant ℤ/2 over the coarse pair groupoid on two objects, actions that
/// keep residues, trivial cocycles.
pub fn ext1_data() -> ExtensionData {
    let p2 = FiniteGroupoid::pair(2);
    let frame = cpair2();
    let k = AbelianGroupBundle::constant_cyclic(2, 2);
    let residue = |e: ElemId| e.0 % 2;
    let vact = BundleAction::from_fn(p2.clone(), k.projection().to_vec(), |g, e| k.fiber(p2.src(g))[residue(e)]);
    let hact = vact.clone();
    let cocycles = CocyclePair::trivial(&frame, &k);
    ExtensionData {
        bundle: k,
        frame,
        vact,
        hact,
        cocycles,
    }
}

pub fn ext1() -> DoubleGroupoid {
    build_extension(&ext1_data()).expect("EXT1 data")
}

/// ℤ/3 over the coarse pair groupoid on two objects. Arrows between distinct
/// objects act by negation, and the cocycles are the coboundaries of a
/// fixed function on frames that vanishes on identity frames.
pub fn twisted_z3_data() -> ExtensionData {
    let p2 = FiniteGroupoid::pair(2);
    let frame = cpair2();
    let k = AbelianGroupBundle::constant_cyclic(2, 3);
    let res = |e: ElemId| e.0 % 3;
    let sign = |g: ArrowId, e: ElemId| {
        let r = res(e);
        let r = if p2.src(g) == p2.tgt(g) { r } else { (3 - r) % 3 };
        k.fiber(p2.src(g))[r]
    };
    let vact = BundleAction::from_fn(p2.clone(), k.projection().to_vec(), sign);
    let hact = vact.clone();
    let identity_frame = |f: BoxId| {
        (frame.h().is_identity(frame.t(f)) && frame.h().is_identity(frame.b(f)))
            || (frame.v().is_identity(frame.l(f)) && frame.v().is_identity(frame.r(f)))
    };
    let phi = |f: BoxId| {
        let r = if identity_frame(f) { 0 } else { (f.0 * 7 + 1) % 3 };
        k.fiber(frame.bl(f))[r]
    };
    let add = |a: ElemId, b: ElemId| k.add(a, b).expect("same fiber");
    let mut cocycles = CocyclePair::default();
    for (f, g, fg) in frame.hcompose_entries() {
        let t = add(add(phi(f), hact.act(frame.b(f), phi(g)).expect("action")), k.neg(phi(fg)));
        cocycles.tau.insert((f, g), t);
    }
    for (f, g, fg) in frame.vcompose_entries() {
        let lg = frame.v().inverse(frame.l(g));
        let s = add(add(vact.act(lg, phi(f)).expect("action"), phi(g)), k.neg(phi(fg)));
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

/// ℤ/3 over coarse(ℤ/2, ℤ/2) with trivial cocycles, `V` acting trivially and
/// the nontrivial horizontal arrow acting by negation. The two edge actions
/// disagree around boxes, so the cocycle equations fail.
pub fn incompatible_actions_data() -> ExtensionData {
    let c2 = FiniteGroupoid::cyclic(2);
    let frame = coarse(&c2, &c2).expect("coarse of Z/2");
    let k = AbelianGroupBundle::constant_cyclic(1, 3);
    let vact = BundleAction::from_fn(c2.clone(), k.projection().to_vec(), |_, e| e);
    let hact = BundleAction::from_fn(c2.clone(), k.projection().to_vec(), |g, e| {
        if c2.is_identity(g) {
            e
        } else {
            k.neg(e)
        }
    });
    let cocycles = CocyclePair::trivial(&frame, &k);
    ExtensionData {
        bundle: k,
        frame,
        vact,
        hact,
        cocycles,
    }
}

/// `D = H = V = pair(n)` with identity maps.
pub fn pair_diagram(n: usize) -> Diagram {
    let p = FiniteGroupoid::pair(n);
    let id = GroupoidMorphism::new(p.arrows().collect());
    Diagram {
        d: p.clone(),
        h: p.clone(),
        v: p,
        i: id.clone(),
        j: id,
    }
}

/// `j: C3 → S3` onto the rotations, `i: C2 → S3` onto a transposition.
pub fn s3_diagram() -> Diagram {
    Diagram {
        d: s3(),
        h: FiniteGroupoid::cyclic(2),
        v: FiniteGroupoid::cyclic(3),
        i: GroupoidMorphism::new(vec![ArrowId(0), ArrowId(1)]),
        j: GroupoidMorphism::new(vec![ArrowId(0), ArrowId(3), ArrowId(4)]),
    }
}

/// The named corpus, in emission order.
pub fn all() -> Vec<(&'static str, DoubleGroupoid)> {
    vec![("A2", a2()), ("CPAIR2", cpair2()), ("CPAIR3", cpair3()), ("S3F", s3f()), ("EXT1", ext1())]
}

pub fn by_name(name: &str) -> Option<DoubleGroupoid> {
    all().into_iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, d)| d)
}

/// A table with one entry changed or removed.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub description: String,
    pub parts: DoubleParts,
}

#[derive(Clone, Copy)]
enum Site {
    Side(usize, usize),
    Compose(bool, usize),
    Unit(usize, usize),
}

/// Every single-entry site that admits a change.
fn sites(p: &DoubleParts) -> Vec<Site> {
    let (nh, nv, n) = (p.h.arrow_count(), p.v.arrow_count(), p.boxes);
    let mut out = Vec::new();
    for (k, range) in [nh, nh, nv, nv].into_iter().enumerate() {
        if range > 1 {
            out.extend((0..n).map(|i| Site::Side(k, i)));
        }
    }
    out.extend((0..p.hcompose.len()).map(|i| Site::Compose(true, i)));
    out.extend((0..p.vcompose.len()).map(|i| Site::Compose(false, i)));
    if n > 1 {
        for (k, len) in [nv, nh, n, n].into_iter().enumerate() {
            out.extend((0..len).map(|i| Site::Unit(k, i)));
        }
    }
    out
}

/// Current value and number of values of a site; for compositions the
/// extra value `boxes` stands for removing the entry.
fn site_range(p: &DoubleParts, site: Site) -> (usize, usize) {
    match site {
        Site::Side(k, i) => {
            let t = [&p.t, &p.b, &p.l, &p.r][k];
            (t[i].0, if k < 2 { p.h.arrow_count() } else { p.v.arrow_count() })
        }
        Site::Compose(h, i) => ((if h { &p.hcompose } else { &p.vcompose })[i].2 .0, p.boxes + 1),
        Site::Unit(k, i) => ([&p.hid, &p.vid, &p.hinv, &p.vinv][k][i].0, p.boxes),
    }
}

fn apply(p: &DoubleParts, site: Site, new: usize) -> Mutation {
    const SIDES: [&str; 4] = ["t", "b", "l", "r"];
    const UNITS: [&str; 4] = ["hid", "vid", "hinv", "vinv"];
    let mut q = p.clone();
    let description = match site {
        Site::Side(k, i) => {
            let table = [&mut q.t, &mut q.b, &mut q.l, &mut q.r].into_iter().nth(k).unwrap();
            let old = table[i].0;
            table[i] = ArrowId(new);
            format!("{}[{i}]: {old} -> {new}", SIDES[k])
        }
        Site::Compose(horizontal, i) => {
            let name = if horizontal { "hcompose" } else { "vcompose" };
            let table = if horizontal { &mut q.hcompose } else { &mut q.vcompose };
            let (a, b, c) = table[i];
            if new == p.boxes {
                table.remove(i);
                format!("{name}: removed ({}, {}) -> {}", a.0, b.0, c.0)
            } else {
                table[i].2 = BoxId(new);
                format!("{name}: ({}, {}) -> {} now {new}", a.0, b.0, c.0)
            }
        }
        Site::Unit(k, i) => {
            let table = [&mut q.hid, &mut q.vid, &mut q.hinv, &mut q.vinv].into_iter().nth(k).unwrap();
            let old = table[i].0;
            table[i] = BoxId(new);
            format!("{}[{i}]: {old} -> {new}", UNITS[k])
        }
    };
    Mutation { description, parts: q }
}

/// The `n`-th (site, value) pair in enumeration order.
fn nth_mutation(p: &DoubleParts, sites: &[Site], mut n: usize) -> Mutation {
    for &site in sites {
        let (current, range) = site_range(p, site);
        if n < range - 1 {
            return apply(p, site, if n >= current { n + 1 } else { n });
        }
        n -= range - 1;
    }
    panic!("mutation index out of range")
}

fn mutation_count(p: &DoubleParts, sites: &[Site]) -> usize {
    sites.iter().map(|&s| site_range(p, s).1 - 1).sum()
}

/// `count` distinct single-entry mutations chosen with a seeded generator,
/// or all of them if there are fewer.
pub fn mutations(d: &DoubleGroupoid, count: usize, seed: u64) -> Vec<Mutation> {
    let p = d.to_parts();
    let s = sites(&p);
    let total = mutation_count(&p, &s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, total, count.min(total)).into_vec();
    picks.sort_unstable();
    picks.into_iter().map(|n| nth_mutation(&p, &s, n)).collect()
}

/// Every single-entry mutation: each site with each alternative value.
pub fn all_mutations(d: &DoubleGroupoid) -> Vec<Mutation> {
    let p = d.to_parts();
    let s = sites(&p);
    (0..mutation_count(&p, &s)).map(|n| nth_mutation(&p, &s, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::{is_vacant, validate_double};
    use crate::extension::validate_cocycle_equations;

    #[test]
    fn corpus_is_valid() {
        for (name, d) in all() {
            let r = validate_double(&d);
            assert!(r.passed(), "{name}\n{r}");
        }
        assert_eq!(a2().len(), 2);
        assert_eq!(cpair2().len(), 16);
        assert_eq!(cpair3().len(), 81);
        assert_eq!(ext1().len(), 32);
        let s = s3f();
        assert_eq!(s.len(), 6);
        assert!(is_vacant(&s));
    }

    #[test]
    fn a2_has_twenty_two_mutations() {
        assert_eq!(all_mutations(&a2()).len(), 22);
    }

    #[test]
    fn twisted_extension_is_valid() {
        let data = twisted_z3_data();
        let r = validate_cocycle_equations(&data);
        assert!(r.passed(), "{r}");
        assert!(data.cocycles.tau.values().any(|t| t.0 % 3 != 0));
        let built = build_extension(&data).unwrap();
        assert_eq!(built.len(), 48);
        assert!(validate_double(&built).passed());
    }

    #[test]
    fn incompatible_actions_fail() {
        let r = validate_cocycle_equations(&incompatible_actions_data());
        assert!(!r.passed());
        assert!(r.failed().any(|c| c.law == "edge actions commute around boxes"), "{r}");
    }

    #[test]
    fn mutations_are_deterministic() {
        let a: Vec<_> = mutations(&cpair2(), 20, 7).into_iter().map(|m| m.description).collect();
        let b: Vec<_> = mutations(&cpair2(), 20, 7).into_iter().map(|m| m.description).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }
}
