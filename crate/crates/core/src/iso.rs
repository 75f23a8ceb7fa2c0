//! Isomorphism search for double groupoids over a common base.

use std::collections::BTreeMap;

use crate::double::{BoxFrame, BoxId, DoubleGroupoid};
use crate::groupoid::{for_each_groupoid_iso, validate_morphism, GroupoidMorphism};
use crate::report::{anchors, Check, Report};

/// Identity-on-objects maps of both edge groupoids plus a box map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleIso {
    pub h: GroupoidMorphism,
    pub v: GroupoidMorphism,
    pub boxes: Vec<BoxId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Found(DoubleIso),
    /// The search space was exhausted; the string says where it was cut.
    Exhausted(String),
}

impl IsoOutcome {
    pub fn witness(&self) -> Option<&DoubleIso> {
        match self {
            IsoOutcome::Found(w) => Some(w),
            IsoOutcome::Exhausted(_) => None,
        }
    }
}

fn map_frame(iso_h: &GroupoidMorphism, iso_v: &GroupoidMorphism, f: BoxFrame) -> BoxFrame {
    BoxFrame::new(iso_h.apply(f.x), iso_v.apply(f.f), iso_v.apply(f.g), iso_h.apply(f.y))
}

fn preimage_profile(d: &DoubleGroupoid) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for fr in d.frames() {
        *m.entry(d.preimages(fr).len()).or_insert(0) += 1;
    }
    m
}

pub fn double_iso(a: &DoubleGroupoid, b: &DoubleGroupoid) -> IsoOutcome {
    if a.base() != b.base() {
        return IsoOutcome::Exhausted(format!("bases differ: {} vs {}", a.base(), b.base()));
    }
    if a.len() != b.len() {
        return IsoOutcome::Exhausted(format!("box counts differ: {} vs {}", a.len(), b.len()));
    }
    if a.h().arrow_count() != b.h().arrow_count() || a.v().arrow_count() != b.v().arrow_count() {
        return IsoOutcome::Exhausted("edge groupoid sizes differ".into());
    }
    if preimage_profile(a) != preimage_profile(b) {
        return IsoOutcome::Exhausted("frame multiplicities differ".into());
    }
    let mut found = None;
    let mut h_isos = 0usize;
    for_each_groupoid_iso(a.h(), b.h(), &mut |ih| {
        h_isos += 1;
        for_each_groupoid_iso(a.v(), b.v(), &mut |iv| {
            if let Some(boxes) = box_bijection(a, b, ih, iv) {
                found = Some(DoubleIso {
                    h: ih.clone(),
                    v: iv.clone(),
                    boxes,
                });
                true
            } else {
                false
            }
        })
    });
    match found {
        Some(w) => IsoOutcome::Found(w),
        None if h_isos == 0 => IsoOutcome::Exhausted("horizontal groupoids are not isomorphic".into()),
        None => IsoOutcome::Exhausted("no box bijection over any pair of edge isomorphisms".into()),
    }
}

struct State {
    fwd: Vec<Option<BoxId>>,
    bwd: Vec<Option<BoxId>>,
}

fn box_bijection(
    a: &DoubleGroupoid,
    b: &DoubleGroupoid,
    ih: &GroupoidMorphism,
    iv: &GroupoidMorphism,
) -> Option<Vec<BoxId>> {
    for fr in a.frames() {
        let image = map_frame(ih, iv, *fr);
        if a.preimages(fr).len() != b.preimages(&image).len() {
            return None;
        }
    }
    let mut st = State {
        fwd: vec![None; a.len()],
        bwd: vec![None; b.len()],
    };
    let mut forced = Vec::new();
    for g in a.v().arrows() {
        forced.push((a.hid(g), b.hid(iv.apply(g))));
    }
    for x in a.h().arrows() {
        forced.push((a.vid(x), b.vid(ih.apply(x))));
    }
    for (x, y) in forced {
        if !assign(a, b, ih, iv, &mut st, x, y) {
            return None;
        }
    }
    search(a, b, ih, iv, st)
}

#[allow(clippy::too_many_arguments)]
fn assign(
    a: &DoubleGroupoid,
    b: &DoubleGroupoid,
    ih: &GroupoidMorphism,
    iv: &GroupoidMorphism,
    st: &mut State,
    x: BoxId,
    y: BoxId,
) -> bool {
    let mut queue = vec![(x, y)];
    while let Some((x, y)) = queue.pop() {
        match (st.fwd[x.0], st.bwd[y.0]) {
            (Some(y0), _) if y0 != y => return false,
            (_, Some(x0)) if x0 != x => return false,
            (Some(_), Some(_)) => continue,
            _ => {}
        }
        if map_frame(ih, iv, a.pi(x)) != b.pi(y) {
            return false;
        }
        st.fwd[x.0] = Some(y);
        st.bwd[y.0] = Some(x);
        queue.push((a.hinv(x), b.hinv(y)));
        queue.push((a.vinv(x), b.vinv(y)));
        for &z in a.boxes_with_left(a.r(x)) {
            if let Some(fz) = st.fwd[z.0] {
                match (a.try_hcompose(x, z), b.try_hcompose(y, fz)) {
                    (Some(p), Some(q)) => queue.push((p, q)),
                    _ => return false,
                }
            }
        }
        for z in a.boxes().filter(|&z| a.r(z) == a.l(x)) {
            if let Some(fz) = st.fwd[z.0] {
                match (a.try_hcompose(z, x), b.try_hcompose(fz, y)) {
                    (Some(p), Some(q)) => queue.push((p, q)),
                    _ => return false,
                }
            }
        }
        for &z in a.boxes_with_top(a.b(x)) {
            if let Some(fz) = st.fwd[z.0] {
                match (a.try_vcompose(x, z), b.try_vcompose(y, fz)) {
                    (Some(p), Some(q)) => queue.push((p, q)),
                    _ => return false,
                }
            }
        }
        for z in a.boxes().filter(|&z| a.b(z) == a.t(x)) {
            if let Some(fz) = st.fwd[z.0] {
                match (a.try_vcompose(z, x), b.try_vcompose(fz, y)) {
                    (Some(p), Some(q)) => queue.push((p, q)),
                    _ => return false,
                }
            }
        }
    }
    true
}

fn search(
    a: &DoubleGroupoid,
    b: &DoubleGroupoid,
    ih: &GroupoidMorphism,
    iv: &GroupoidMorphism,
    st: State,
) -> Option<Vec<BoxId>> {
    // branch on the unassigned box with the fewest candidates
    let mut best: Option<(BoxId, Vec<BoxId>)> = None;
    for x in a.boxes().filter(|x| st.fwd[x.0].is_none()) {
        let cands: Vec<BoxId> = b
            .preimages(&map_frame(ih, iv, a.pi(x)))
            .iter()
            .copied()
            .filter(|y| st.bwd[y.0].is_none())
            .collect();
        if best.as_ref().is_none_or(|(_, c)| cands.len() < c.len()) {
            let done = cands.len() <= 1;
            best = Some((x, cands));
            if done {
                break;
            }
        }
    }
    let Some((x, cands)) = best else {
        return Some(st.fwd.into_iter().map(|y| y.unwrap()).collect());
    };
    for y in cands {
        let mut next = State {
            fwd: st.fwd.clone(),
            bwd: st.bwd.clone(),
        };
        if assign(a, b, ih, iv, &mut next, x, y) {
            if let Some(w) = search(a, b, ih, iv, next) {
                return Some(w);
            }
        }
    }
    None
}

/// Checks that `w` is an isomorphism `a → b` of double groupoids.
pub fn check_double_morphism(a: &DoubleGroupoid, b: &DoubleGroupoid, w: &DoubleIso) -> Report {
    let anchor = anchors::ISOMORPHISM;
    let mut report = Report::new("double groupoid isomorphism");
    report.absorb("H: ", validate_morphism(a.h(), b.h(), &w.h));
    report.absorb("V: ", validate_morphism(a.v(), b.v(), &w.v));
    let mut shape = Check::new("box map is a bijection", anchor);
    shape.case(w.boxes.len() == a.len() && a.len() == b.len(), || {
        format!("{} entries for {} boxes onto {}", w.boxes.len(), a.len(), b.len())
    });
    shape.case(w.h.is_injective() && w.v.is_injective(), || "edge maps are not injective".into());
    if shape.passed() {
        let mut seen = vec![false; b.len()];
        for &y in &w.boxes {
            shape.case(y.0 < b.len() && !std::mem::replace(&mut seen[y.0], true), || format!("{y} hit twice or out of range"));
        }
    }
    let ok = shape.passed() && report.passed();
    report.push(shape);
    if !ok {
        return report;
    }
    let f = |x: BoxId| w.boxes[x.0];
    let mut edges = Check::new("box map respects sides", anchor);
    let mut comp = Check::new("box map respects compositions", anchor);
    let mut units = Check::new("box map respects identities and inverses", anchor);
    for x in a.boxes() {
        edges.case(map_frame(&w.h, &w.v, a.pi(x)) == b.pi(f(x)), || format!("{x} ↦ {} changes sides", f(x)));
        units.case(f(a.hinv(x)) == b.hinv(f(x)) && f(a.vinv(x)) == b.vinv(f(x)), || format!("inverses of {x}"));
    }
    for g in a.v().arrows() {
        units.case(f(a.hid(g)) == b.hid(w.v.apply(g)), || format!("horizontal identity on {g}"));
    }
    for x in a.h().arrows() {
        units.case(f(a.vid(x)) == b.vid(w.h.apply(x)), || format!("vertical identity on {x}"));
    }
    for (x, y, z) in a.hcompose_entries() {
        comp.case(b.try_hcompose(f(x), f(y)) == Some(f(z)), || format!("{x}{y} = {z}"));
    }
    for (x, y, z) in a.vcompose_entries() {
        comp.case(b.try_vcompose(f(x), f(y)) == Some(f(z)), || format!("{x}/{y} = {z}"));
    }
    report.push(edges);
    report.push(comp);
    report.push(units);
    report
}

/// The identity maps on the edge groupoids of `d`, for explicit witnesses
/// between double groupoids that share them.
pub fn identity_edges(d: &DoubleGroupoid, boxes: Vec<BoxId>) -> DoubleIso {
    DoubleIso {
        h: GroupoidMorphism::new(d.h().arrows().collect()),
        v: GroupoidMorphism::new(d.v().arrows().collect()),
        boxes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::coarse;
    use crate::groupoid::FiniteGroupoid;

    #[test]
    fn self_iso_found_and_checks() {
        let p2 = FiniteGroupoid::pair(2);
        let d = coarse(&p2, &p2).unwrap();
        let w = double_iso(&d, &d);
        let w = w.witness().unwrap();
        assert!(check_double_morphism(&d, &d, w).passed());
    }

    #[test]
    fn size_mismatch_is_exhausted() {
        let p2 = FiniteGroupoid::pair(2);
        let one = FiniteGroupoid::discrete(1);
        let a = coarse(&p2, &p2).unwrap();
        let b = coarse(&one, &one).unwrap();
        assert!(matches!(double_iso(&a, &b), IsoOutcome::Exhausted(_)));
    }

    #[test]
    fn coarse_on_swapped_edges_differs() {
        let p2 = FiniteGroupoid::pair(2);
        let d2 = FiniteGroupoid::discrete(2);
        let a = coarse(&p2, &d2).unwrap();
        let b = coarse(&d2, &p2).unwrap();
        assert!(double_iso(&a, &b).witness().is_none());
    }
}
