//! Abelian extensions of a kernel bundle by a slim frame, and the
//! decomposition of an arbitrary double groupoid into one.
//!
//! Kernel fibers are written additively here; the products are
//!
//! ```text
//! (K,F)(L,G)  = (K + b(F)·L + τ(F,G), FG)
//! (K,F)/(L,G) = (l(G)⁻¹·K + L + σ(F,G), F/G)
//! ```

use std::collections::{BTreeMap, HashMap};

use crate::double::{frame, validate_double, BoxId, DoubleGroupoid, DoubleParts};
use crate::error::{Error, Result};
use crate::groupoid::{validate_action, AbelianGroupBundle, ArrowId, BundleAction, ElemId};
use crate::kernel::{core, core_act, h_action, kernel, v_action, CoreGroupoid, KernelBundle};
use crate::report::{anchors, Check, Report};

/// A section of the frame map, indexed by frame box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub mu: Vec<BoxId>,
}

impl Section {
    pub fn apply(&self, f: BoxId) -> BoxId {
        self.mu[f.0]
    }
}

/// Cocycles keyed by composable pairs of frame boxes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocyclePair {
    pub tau: BTreeMap<(BoxId, BoxId), ElemId>,
    pub sigma: BTreeMap<(BoxId, BoxId), ElemId>,
}

impl CocyclePair {
    pub fn tau(&self, f: BoxId, g: BoxId) -> Option<ElemId> {
        self.tau.get(&(f, g)).copied()
    }

    pub fn sigma(&self, f: BoxId, g: BoxId) -> Option<ElemId> {
        self.sigma.get(&(f, g)).copied()
    }

    /// Both cocycles identically neutral on every composable pair of `frame`.
    pub fn trivial(frame: &DoubleGroupoid, k: &AbelianGroupBundle) -> Self {
        let mut c = CocyclePair::default();
        for (f, g, _) in frame.hcompose_entries() {
            c.tau.insert((f, g), k.neutral(frame.bl(f)));
        }
        for (f, g, _) in frame.vcompose_entries() {
            c.sigma.insert((f, g), k.neutral(frame.bl(g)));
        }
        c
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub bundle: AbelianGroupBundle,
    pub frame: DoubleGroupoid,
    pub vact: BundleAction,
    pub hact: BundleAction,
    pub cocycles: CocyclePair,
}

/// Least-index preimage of each frame, with identity frames sent to the
/// identity boxes.
pub fn choose_section(d: &DoubleGroupoid, f: &DoubleGroupoid) -> Result<Section> {
    let (h, v) = (d.h(), d.v());
    let mut mu = Vec::with_capacity(f.len());
    for fb in f.boxes() {
        let fr = f.pi(fb);
        let chosen = if h.is_identity(fr.x) && h.is_identity(fr.y) && fr.f == fr.g {
            d.hid(fr.f)
        } else if v.is_identity(fr.f) && v.is_identity(fr.g) && fr.x == fr.y {
            d.vid(fr.x)
        } else {
            *d.preimages(&fr)
                .first()
                .ok_or_else(|| Error::Inconsistent(format!("frame {fr} has no preimage")))?
        };
        if d.pi(chosen) != fr {
            return Err(Error::Inconsistent(format!("section sends {fr} to {chosen}")));
        }
        mu.push(chosen);
    }
    Ok(Section { mu })
}

/// The unique kernel element `K` with `K ⇀ a = target`.
fn solve(d: &DoubleGroupoid, c: &CoreGroupoid, k: &KernelBundle, a: BoxId, target: BoxId) -> Result<ElemId> {
    let mut found = Vec::new();
    for &e in c.groupoid.arrows_into(d.bl(a)) {
        if core_act(d, c.box_of(e), a)? == target {
            found.push(c.box_of(e));
        }
    }
    match found.as_slice() {
        [one] => k
            .elem_of(*one)
            .ok_or_else(|| Error::SolveFailed(format!("{target} = {one} ⇀ {a} but {one} is not in the kernel"))),
        [] => Err(Error::SolveFailed(format!("no core box moves {a} to {target}"))),
        many => Err(Error::SolveFailed(format!("{} core boxes move {a} to {target}", many.len()))),
    }
}

/// Measures how far the section is from multiplicative:
/// `μ(F)μ(G) = τ(F,G) ⇀ μ(FG)` and `μ(F)/μ(G) = σ(F,G) ⇀ μ(F/G)`.
pub fn extract_cocycles(
    d: &DoubleGroupoid,
    f: &DoubleGroupoid,
    mu: &Section,
    c: &CoreGroupoid,
    k: &KernelBundle,
) -> Result<CocyclePair> {
    let mut out = CocyclePair::default();
    let mut h: Vec<_> = f.hcompose_entries().collect();
    h.sort_unstable();
    for (x, y, xy) in h {
        let prod = d.hcompose(mu.apply(x), mu.apply(y))?;
        out.tau.insert((x, y), solve(d, c, k, mu.apply(xy), prod)?);
    }
    let mut v: Vec<_> = f.vcompose_entries().collect();
    v.sort_unstable();
    for (x, y, xy) in v {
        let prod = d.vcompose(mu.apply(x), mu.apply(y))?;
        out.sigma.insert((x, y), solve(d, c, k, mu.apply(xy), prod)?);
    }
    Ok(out)
}

struct Ops<'a> {
    e: &'a ExtensionData,
}

impl Ops<'_> {
    fn add(&self, a: Option<ElemId>, b: Option<ElemId>) -> Option<ElemId> {
        self.e.bundle.try_add(a?, b?)
    }

    fn sum(&self, xs: &[Option<ElemId>]) -> Option<ElemId> {
        let mut acc = xs[0];
        for &x in &xs[1..] {
            acc = self.add(acc, x);
        }
        acc
    }

    fn v(&self, g: ArrowId, k: Option<ElemId>) -> Option<ElemId> {
        self.e.vact.try_act(g, k?)
    }

    fn h(&self, x: ArrowId, k: Option<ElemId>) -> Option<ElemId> {
        self.e.hact.try_act(x, k?)
    }

    fn vinv(&self, g: ArrowId) -> ArrowId {
        self.e.frame.v().inverse(g)
    }

    fn hinv(&self, x: ArrowId) -> ArrowId {
        self.e.frame.h().inverse(x)
    }

    fn tau(&self, f: BoxId, g: BoxId) -> Option<ElemId> {
        self.e.cocycles.tau(f, g)
    }

    fn sigma(&self, f: BoxId, g: BoxId) -> Option<ElemId> {
        self.e.cocycles.sigma(f, g)
    }
}

fn check_shapes(e: &ExtensionData) -> Report {
    let a = anchors::COCYCLE_EQUATIONS;
    let (fr, k) = (&e.frame, &e.bundle);
    let mut report = Report::new("extension data");
    let mut shape = Check::new("components share the base", a);
    shape.case(k.base() == fr.base(), || format!("bundle base {} vs frame base {}", k.base(), fr.base()));
    shape.case(e.vact.actor() == fr.v(), || "vertical action is not by the frame's vertical groupoid".into());
    shape.case(e.hact.actor() == fr.h(), || "horizontal action is not by the frame's horizontal groupoid".into());
    shape.case(e.vact.projection() == k.projection(), || "vertical action is not on the bundle".into());
    shape.case(e.hact.projection() == k.projection(), || "horizontal action is not on the bundle".into());
    report.push(shape);
    if !report.passed() {
        return report;
    }
    report.absorb("frame: ", validate_double(fr));
    report.absorb("bundle: ", crate::groupoid::validate_bundle(k));
    report.absorb("vertical action: ", validate_action(&e.vact));
    report.absorb("vertical action: ", e.vact.check_by_automorphisms(k));
    report.absorb("horizontal action: ", validate_action(&e.hact));
    report.absorb("horizontal action: ", e.hact.check_by_automorphisms(k));
    report
}

/// Checks that the data defines a double groupoid: shapes, base and
/// normalization conditions, then the four compatibility equations.
pub fn validate_cocycle_equations(e: &ExtensionData) -> Report {
    let a = anchors::COCYCLE_EQUATIONS;
    let mut report = check_shapes(e);
    if !report.passed() {
        return report;
    }
    let fr = &e.frame;
    let k = &e.bundle;
    let o = Ops { e };

    let mut keys = Check::new("cocycles defined exactly on composable pairs", a);
    let mut base = Check::new("cocycle values lie over the right vertex", a);
    let hpairs: Vec<_> = {
        let mut p: Vec<_> = fr.hcompose_entries().map(|(x, y, _)| (x, y)).collect();
        p.sort_unstable();
        p
    };
    let vpairs: Vec<_> = {
        let mut p: Vec<_> = fr.vcompose_entries().map(|(x, y, _)| (x, y)).collect();
        p.sort_unstable();
        p
    };
    for &(x, y) in &hpairs {
        match o.tau(x, y) {
            None => keys.fail(|| format!("tau({x}, {y}) missing")),
            Some(t) => {
                keys.case(true, String::new);
                base.case(t.0 < k.len() && k.fiber_of(t) == fr.bl(x), || format!("tau({x}, {y}) = {t} not over {}", fr.bl(x)));
            }
        }
    }
    for &(x, y) in &vpairs {
        match o.sigma(x, y) {
            None => keys.fail(|| format!("sigma({x}, {y}) missing")),
            Some(s) => {
                keys.case(true, String::new);
                base.case(s.0 < k.len() && k.fiber_of(s) == fr.bl(y), || format!("sigma({x}, {y}) = {s} not over {}", fr.bl(y)));
            }
        }
    }
    keys.case(e.cocycles.tau.len() == hpairs.len(), || "tau has entries on non-composable pairs".into());
    keys.case(e.cocycles.sigma.len() == vpairs.len(), || "sigma has entries on non-composable pairs".into());
    report.push(keys);
    report.push(base);
    if !report.passed() {
        return report;
    }

    let mut norm = Check::new("cocycles vanish on identities", a);
    for x in fr.boxes() {
        let (il, ir) = (fr.hid(fr.l(x)), fr.hid(fr.r(x)));
        let (it, ib) = (fr.vid(fr.t(x)), fr.vid(fr.b(x)));
        let zero = k.neutral(fr.bl(x));
        norm.case(o.tau(x, ir) == Some(zero) && o.tau(il, x) == Some(zero), || format!("tau at {x} and a horizontal identity"));
        norm.case(o.sigma(x, ib) == Some(zero) && o.sigma(it, x) == Some(zero), || format!("sigma at {x} and a vertical identity"));
    }

    let mut eq_tau = Check::new("horizontal cocycle equation", a);
    let mut eq_sigma = Check::new("vertical cocycle equation", a);
    let mut eq_act = Check::new("edge actions commute around boxes", a);
    let mut eq_mix = Check::new("mixed cocycle equation", a);
    for x in fr.boxes() {
        for &y in fr.boxes_with_left(fr.r(x)) {
            let xy = fr.try_hcompose(x, y).expect("validated frame");
            for &z in fr.boxes_with_left(fr.r(y)) {
                let yz = fr.try_hcompose(y, z).expect("validated frame");
                let lhs = o.add(o.tau(x, y), o.tau(xy, z));
                let rhs = o.add(o.tau(x, yz), o.h(fr.b(x), o.tau(y, z)));
                eq_tau.case(lhs.is_some() && lhs == rhs, || format!("({x}, {y}, {z}): {lhs:?} vs {rhs:?}"));
            }
        }
        for &y in fr.boxes_with_top(fr.b(x)) {
            let xy = fr.try_vcompose(x, y).expect("validated frame");
            for &z in fr.boxes_with_top(fr.b(y)) {
                let yz = fr.try_vcompose(y, z).expect("validated frame");
                let lhs = o.add(o.sigma(y, z), o.sigma(x, yz));
                let rhs = o.add(o.v(o.vinv(fr.l(z)), o.sigma(x, y)), o.sigma(xy, z));
                eq_sigma.case(lhs.is_some() && lhs == rhs, || format!("({x} / {y} / {z}): {lhs:?} vs {rhs:?}"));
            }
        }
        for &l in k.fiber(fr.tr(x)) {
            let lhs = o.v(o.vinv(fr.l(x)), o.h(fr.t(x), Some(l)));
            let rhs = o.h(fr.b(x), o.v(o.vinv(fr.r(x)), Some(l)));
            eq_act.case(lhs.is_some() && lhs == rhs, || format!("box {x}, element {l}: {lhs:?} vs {rhs:?}"));
        }
    }
    // squares [F G; H J]
    for f in fr.boxes() {
        for &g in fr.boxes_with_left(fr.r(f)) {
            for &hh in fr.boxes_with_top(fr.b(f)) {
                for &j in fr.boxes_with_left(fr.r(hh)) {
                    if fr.t(j) != fr.b(g) {
                        continue;
                    }
                    let fg = fr.try_hcompose(f, g).expect("validated frame");
                    let hj = fr.try_hcompose(hh, j).expect("validated frame");
                    let fh = fr.try_vcompose(f, hh).expect("validated frame");
                    let gj = fr.try_vcompose(g, j).expect("validated frame");
                    let lhs = o.sum(&[o.v(o.vinv(fr.l(hh)), o.tau(f, g)), o.tau(hh, j), o.sigma(fg, hj)]);
                    let rhs = o.sum(&[o.h(fr.b(hh), o.sigma(g, j)), o.sigma(f, hh), o.tau(fh, gj)]);
                    eq_mix.case(lhs.is_some() && lhs == rhs, || format!("[{f} {g}; {hh} {j}]: {lhs:?} vs {rhs:?}"));
                }
            }
        }
    }
    for c in [norm, eq_tau, eq_sigma, eq_act, eq_mix] {
        report.push(c);
    }
    report
}

/// The double groupoid of pairs `(K, F)` with `K` over the bottom-left corner
/// of `F`. Box order is by frame box, then by kernel element.
pub fn build_extension(e: &ExtensionData) -> Result<DoubleGroupoid> {
    let report = validate_cocycle_equations(e);
    if !report.passed() {
        return Err(Error::CocycleInvalid(Box::new(report)));
    }
    Ok(build_unchecked(e))
}

/// Index of each pair `(K, F)` in [`build_extension`]'s box order.
pub fn pair_index(e: &ExtensionData) -> Vec<(ElemId, BoxId)> {
    let mut pairs = Vec::new();
    for f in e.frame.boxes() {
        for &k in e.bundle.fiber(e.frame.bl(f)) {
            pairs.push((k, f));
        }
    }
    pairs
}

fn build_unchecked(e: &ExtensionData) -> DoubleGroupoid {
    let fr = &e.frame;
    let k = &e.bundle;
    let o = Ops { e };
    let pairs = pair_index(e);
    let index: HashMap<(ElemId, BoxId), BoxId> = pairs.iter().enumerate().map(|(i, &p)| (p, BoxId(i))).collect();
    let at = |kk: Option<ElemId>, f: BoxId| index[&(kk.expect("validated extension data"), f)];
    let mut hcompose = Vec::new();
    let mut vcompose = Vec::new();
    let mut hinv = Vec::with_capacity(pairs.len());
    let mut vinv = Vec::with_capacity(pairs.len());
    for (i, &(kk, f)) in pairs.iter().enumerate() {
        for &g in fr.boxes_with_left(fr.r(f)) {
            let fg = fr.try_hcompose(f, g).expect("validated frame");
            for &l in k.fiber(fr.bl(g)) {
                let c = o.sum(&[Some(kk), o.h(fr.b(f), Some(l)), o.tau(f, g)]);
                hcompose.push((BoxId(i), index[&(l, g)], at(c, fg)));
            }
        }
        for &g in fr.boxes_with_top(fr.b(f)) {
            let fg = fr.try_vcompose(f, g).expect("validated frame");
            for &l in k.fiber(fr.bl(g)) {
                let c = o.sum(&[o.v(o.vinv(fr.l(g)), Some(kk)), Some(l), o.sigma(f, g)]);
                vcompose.push((BoxId(i), index[&(l, g)], at(c, fg)));
            }
        }
        let fh = fr.hinv(f);
        let inner = o.add(Some(k.neg(kk)), o.tau(f, fh).map(|t| k.neg(t)));
        hinv.push(at(o.h(o.hinv(fr.b(f)), inner), fh));
        let fv = fr.vinv(f);
        let moved = o.v(fr.l(f), Some(kk)).map(|m| k.neg(m));
        vinv.push(at(o.add(moved, o.sigma(f, fv).map(|s| k.neg(s))), fv));
    }
    let hid = fr
        .v()
        .arrows()
        .map(|g| index[&(k.neutral(fr.v().tgt(g)), fr.hid(g))])
        .collect();
    let vid = fr
        .h()
        .arrows()
        .map(|x| index[&(k.neutral(fr.h().src(x)), fr.vid(x))])
        .collect();
    DoubleGroupoid::from_parts(DoubleParts {
        base: fr.base(),
        h: fr.h().clone(),
        v: fr.v().clone(),
        boxes: pairs.len(),
        t: pairs.iter().map(|&(_, f)| fr.t(f)).collect(),
        b: pairs.iter().map(|&(_, f)| fr.b(f)).collect(),
        l: pairs.iter().map(|&(_, f)| fr.l(f)).collect(),
        r: pairs.iter().map(|&(_, f)| fr.r(f)).collect(),
        hcompose,
        vcompose,
        hid,
        vid,
        hinv,
        vinv,
    })
    .expect("tables built from valid extension data")
}

/// Checks that every built box `(K, F)` is `K ⇀ (0, F)` computed inside the
/// built double groupoid.
pub fn sandwich_check(e: &ExtensionData, built: &DoubleGroupoid) -> Report {
    let mut report = Report::new("extension boxes");
    let mut check = Check::new("each pair is its kernel part acting on its frame part", anchors::EXTENSION_THEOREM);
    let pairs = pair_index(e);
    let index: HashMap<(ElemId, BoxId), BoxId> = pairs.iter().enumerate().map(|(i, &p)| (p, BoxId(i))).collect();
    for (i, &(kk, f)) in pairs.iter().enumerate() {
        let p = e.frame.bl(f);
        let theta_frame = e.frame.theta(p);
        let kbox = index[&(kk, theta_frame)];
        let mu = index[&(e.bundle.neutral(p), f)];
        let got = core_act(built, kbox, mu);
        check.case(matches!(got, Ok(b) if b == BoxId(i)), || format!("({kk}, {f}) recomputes to {got:?}"));
    }
    report.push(check);
    report
}

/// Everything extracted from a double groupoid, with the maps needed to
/// compare the rebuilt double groupoid against the original.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub data: ExtensionData,
    pub section: Section,
    pub kernel: KernelBundle,
}

impl Decomposition {
    /// `Ψ(K, F) = K ⇀ μ(F)` on the pairs of [`pair_index`].
    pub fn psi(&self, d: &DoubleGroupoid) -> Result<Vec<BoxId>> {
        pair_index(&self.data)
            .into_iter()
            .map(|(k, f)| core_act(d, self.kernel.box_of(k), self.section.apply(f)))
            .collect()
    }
}

pub fn decompose(d: &DoubleGroupoid) -> Result<Decomposition> {
    let k = kernel(d)?;
    let f = frame(d)?;
    let c = core(d)?;
    let section = choose_section(d, &f)?;
    let cocycles = extract_cocycles(d, &f, &section, &c, &k)?;
    let vact = v_action(d, &k)?;
    let hact = h_action(d, &k)?;
    Ok(Decomposition {
        data: ExtensionData {
            bundle: k.bundle.clone(),
            frame: f,
            vact,
            hact,
            cocycles,
        },
        section,
        kernel: k,
    })
}

/// Checks that `Ψ` is a bijection onto the boxes of `d`.
pub fn psi_check(d: &DoubleGroupoid, dec: &Decomposition) -> Result<Report> {
    let a = anchors::FRAME_KERNEL_BIJECTION;
    let psi = dec.psi(d)?;
    let mut report = Report::new("kernel times frame");
    let mut count = Check::new("box count is the sum of kernel fibers over frames", a);
    let total: usize = dec
        .data
        .frame
        .boxes()
        .map(|f| dec.data.bundle.fiber(dec.data.frame.bl(f)).len())
        .sum();
    count.case(total == d.len(), || format!("|boxes| = {}, sum over frames = {total}", d.len()));
    let mut bij = Check::new("pairs map bijectively onto boxes", a);
    let mut hit = vec![0usize; d.len()];
    for b in &psi {
        hit[b.0] += 1;
    }
    for (i, n) in hit.iter().enumerate() {
        bij.case(*n == 1, || format!("B{i} is hit {n} times"));
    }
    report.push(count);
    report.push(bij);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::coarse;
    use crate::groupoid::FiniteGroupoid;

    #[test]
    fn slim_decomposition_is_trivial() {
        let p2 = FiniteGroupoid::pair(2);
        let d = coarse(&p2, &p2).unwrap();
        let dec = decompose(&d).unwrap();
        assert!(dec.data.cocycles.tau.values().all(|&t| dec.data.bundle.fiber(dec.data.bundle.fiber_of(t))[0] == t));
        assert!(validate_cocycle_equations(&dec.data).passed());
        let built = build_extension(&dec.data).unwrap();
        assert_eq!(built.len(), 16);
        assert!(validate_double(&built).passed());
        assert!(sandwich_check(&dec.data, &built).passed());
        assert!(psi_check(&d, &dec).unwrap().passed());
    }

    #[test]
    fn trivial_extension_of_coarse_pair_by_z2() {
        let p2 = FiniteGroupoid::pair(2);
        let f = coarse(&p2, &p2).unwrap();
        let k = AbelianGroupBundle::constant_cyclic(2, 2);
        let residue = |e: ElemId| e.0 % 2;
        let vact = BundleAction::from_fn(p2.clone(), k.projection().to_vec(), |g, e| k.fiber(p2.src(g))[residue(e)]);
        let hact = vact.clone();
        let cocycles = CocyclePair::trivial(&f, &k);
        let data = ExtensionData {
            bundle: k,
            frame: f,
            vact,
            hact,
            cocycles,
        };
        assert!(validate_cocycle_equations(&data).passed());
        let built = build_extension(&data).unwrap();
        assert_eq!(built.len(), 32);
        assert!(validate_double(&built).passed());
        assert!(!built.is_slim());
    }
}
