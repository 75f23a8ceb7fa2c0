use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::DoubleGroupoid;
use crate::groupoid::ArrowId;
use crate::report::{anchors, Check, Report};

/// The four corner functions at one box: the number of boxes sharing its
/// top and right sides, top and left, left and bottom, right and bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoxCorners {
    pub upper_right: usize,
    pub upper_left: usize,
    pub lower_left: usize,
    pub lower_right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerReport {
    pub boxes: Vec<BoxCorners>,
    /// The common corner value at the doubly-identity box of each object.
    pub theta: Vec<usize>,
}

fn count<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> HashMap<K, usize> {
    let mut m = HashMap::new();
    for k in keys {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

pub fn corners(d: &DoubleGroupoid) -> CornerReport {
    let ur = count(d.boxes().map(|a| (d.t(a), d.r(a))));
    let ul = count(d.boxes().map(|a| (d.t(a), d.l(a))));
    let ll = count(d.boxes().map(|a| (d.l(a), d.b(a))));
    let lr = count(d.boxes().map(|a| (d.r(a), d.b(a))));
    let boxes = d
        .boxes()
        .map(|a| BoxCorners {
            upper_right: ur[&(d.t(a), d.r(a))],
            upper_left: ul[&(d.t(a), d.l(a))],
            lower_left: ll[&(d.l(a), d.b(a))],
            lower_right: lr[&(d.r(a), d.b(a))],
        })
        .collect();
    let theta = d
        .objects()
        .map(|p| {
            ur.get(&(d.h().identity(p), d.v().identity(p)))
                .copied()
                .unwrap_or(0)
        })
        .collect();
    CornerReport { boxes, theta }
}

/// `|Ur(x, g)|` for every matching pair of a top and a right side.
fn ur_counts(d: &DoubleGroupoid) -> Vec<((ArrowId, ArrowId), usize)> {
    let mut out = Vec::new();
    for x in d.h().arrows() {
        for &g in d.v().arrows_from(d.h().tgt(x)) {
            out.push(((x, g), d.ur_set(x, g).map_or(0, |s| s.len())));
        }
    }
    out
}

/// Every matching top and right side bound at least one box.
pub fn has_filling(d: &DoubleGroupoid) -> bool {
    ur_counts(d).iter().all(|&(_, n)| n >= 1)
}

/// Every matching top and right side bound exactly one box.
pub fn is_vacant(d: &DoubleGroupoid) -> bool {
    ur_counts(d).iter().all(|&(_, n)| n == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transitivity {
    /// Any matching top, right and bottom complete to a box.
    pub horizontal: bool,
    /// Any matching top, left and right complete to a box.
    pub vertical: bool,
}

pub fn transitivity(d: &DoubleGroupoid) -> Transitivity {
    let (h, v) = (d.h(), d.v());
    let trb: HashSet<_> = d.boxes().map(|a| (d.t(a), d.r(a), d.b(a))).collect();
    let tlr: HashSet<_> = d.boxes().map(|a| (d.t(a), d.l(a), d.r(a))).collect();
    let mut horizontal = true;
    let mut vertical = true;
    for x in h.arrows() {
        for &g in v.arrows_from(h.tgt(x)) {
            for &y in h.arrows_into(v.tgt(g)) {
                horizontal &= trb.contains(&(x, g, y));
            }
            for &f in v.arrows_from(h.src(x)) {
                vertical &= tlr.contains(&(x, f, g));
            }
        }
    }
    Transitivity { horizontal, vertical }
}

/// Checks how the corner functions behave under adjacency and composition.
pub fn corner_facts(d: &DoubleGroupoid) -> Report {
    let a = anchors::CORNER_FORMULA;
    let c = corners(d);
    let k = |x: super::BoxId| c.boxes[x.0];
    let mut report = Report::new("corner functions");
    let mut adj = Check::new("corners of adjacent boxes", a);
    let mut comp = Check::new("corners of composites", a);
    for l in d.boxes() {
        for &m in d.boxes_with_left(d.r(l)) {
            for &n in d.boxes_with_top(d.b(l)) {
                let (cl, cm, cn) = (k(l), k(m), k(n));
                adj.case(
                    cl.upper_left == cm.upper_right
                        && cl.lower_left == cm.lower_right
                        && cl.upper_left == cn.lower_left
                        && cl.upper_right == cn.lower_right,
                    || format!("[{l} {m}; {n}]: {cl:?}, {cm:?}, {cn:?}"),
                );
            }
            if let Some(lm) = d.try_hcompose(l, m) {
                comp.case(
                    k(lm).upper_right == k(l).upper_right && k(lm).lower_left == k(m).lower_left,
                    || format!("{l}{m} = {lm}"),
                );
            }
        }
        for &n in d.boxes_with_top(d.b(l)) {
            if let Some(ln) = d.try_vcompose(l, n) {
                comp.case(
                    k(ln).upper_right == k(n).upper_right && k(ln).lower_left == k(l).lower_left,
                    || format!("{l}/{n} = {ln}"),
                );
            }
        }
    }
    let mut theta = Check::new("four corners agree at identity boxes", a);
    for p in d.objects() {
        let t = k(d.theta(p));
        theta.case(
            t.upper_right == t.upper_left && t.upper_left == t.lower_left && t.lower_left == t.lower_right,
            || format!("at {p}: {t:?}"),
        );
    }
    report.push(adj);
    report.push(comp);
    report.push(theta);
    report
}

#[cfg(test)]
mod tests {
    use super::super::coarse;
    use super::*;
    use crate::groupoid::FiniteGroupoid;

    #[test]
    fn coarse_pair_corners_are_two() {
        let p2 = FiniteGroupoid::pair(2);
        let d = coarse(&p2, &p2).unwrap();
        let c = corners(&d);
        assert!(c.boxes.iter().all(|b| b.upper_right == 2 && b.lower_left == 2));
        assert_eq!(c.theta, vec![2, 2]);
        assert!(has_filling(&d));
        assert!(!is_vacant(&d));
        assert_eq!(transitivity(&d), Transitivity { horizontal: true, vertical: true });
        assert!(corner_facts(&d).passed());
    }

    #[test]
    fn single_box_is_vacant() {
        let one = FiniteGroupoid::discrete(1);
        let d = coarse(&one, &one).unwrap();
        assert!(is_vacant(&d));
        assert_eq!(corners(&d).theta, vec![1]);
    }
}
