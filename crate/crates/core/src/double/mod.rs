//! Double groupoids as abstract boxes with four edge maps.
//!
//! A box `A` has top `t(A)` and bottom `b(A)` in `H`, left `l(A)` and right
//! `r(A)` in `V`. Horizontal arrows go left to right, vertical arrows top to
//! bottom, so the corners are `tl = src t = src l`, `tr = tgt t = src r`,
//! `bl = src b = tgt l`, `br = tgt b = tgt r`.

mod corners;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid, ObjectId};

pub use corners::{corner_facts, corners, has_filling, is_vacant, transitivity, BoxCorners, CornerReport, Transitivity};
pub use validate::{check_frame_morphism, validate_double, INTERCHANGE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoxId(pub usize);

impl fmt::Display for BoxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}", self.0)
    }
}

/// The four sides of a box: top `x`, left `f`, right `g`, bottom `y`.
///
/// The derived order is lexicographic in `(x, f, g, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoxFrame {
    pub x: ArrowId,
    pub f: ArrowId,
    pub g: ArrowId,
    pub y: ArrowId,
}

impl BoxFrame {
    pub fn new(x: ArrowId, f: ArrowId, g: ArrowId, y: ArrowId) -> Self {
        BoxFrame { x, f, g, y }
    }

    /// Whether the sides meet at all four corners.
    pub fn matches(&self, v: &FiniteGroupoid, h: &FiniteGroupoid) -> bool {
        h.src(self.x) == v.src(self.f)
            && h.tgt(self.x) == v.src(self.g)
            && h.src(self.y) == v.tgt(self.f)
            && h.tgt(self.y) == v.tgt(self.g)
    }
}

impl fmt::Display for BoxFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(top {}, left {}, right {}, bottom {})", self.x, self.f, self.g, self.y)
    }
}

/// Raw tables of a double groupoid, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleParts {
    pub base: usize,
    pub h: FiniteGroupoid,
    pub v: FiniteGroupoid,
    pub boxes: usize,
    pub t: Vec<ArrowId>,
    pub b: Vec<ArrowId>,
    pub l: Vec<ArrowId>,
    pub r: Vec<ArrowId>,
    pub hcompose: Vec<(BoxId, BoxId, BoxId)>,
    pub vcompose: Vec<(BoxId, BoxId, BoxId)>,
    pub hid: Vec<BoxId>,
    pub vid: Vec<BoxId>,
    pub hinv: Vec<BoxId>,
    pub vinv: Vec<BoxId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleGroupoid {
    base: usize,
    h: FiniteGroupoid,
    v: FiniteGroupoid,
    t: Vec<ArrowId>,
    b: Vec<ArrowId>,
    l: Vec<ArrowId>,
    r: Vec<ArrowId>,
    hcompose: HashMap<(BoxId, BoxId), BoxId>,
    vcompose: HashMap<(BoxId, BoxId), BoxId>,
    hid: Vec<BoxId>,
    vid: Vec<BoxId>,
    hinv: Vec<BoxId>,
    vinv: Vec<BoxId>,
    by_left: Vec<Vec<BoxId>>,
    by_top: Vec<Vec<BoxId>>,
    by_ur: HashMap<(ArrowId, ArrowId), Vec<BoxId>>,
    by_frame: BTreeMap<BoxFrame, Vec<BoxId>>,
}

fn check_len<T>(field: &str, v: &[T], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::format(field, format!("expected {n} entries, found {}", v.len())));
    }
    Ok(())
}

fn check_range<T: Copy>(field: &str, v: &[T], n: usize, idx: impl Fn(T) -> usize) -> Result<()> {
    if let Some((i, a)) = v.iter().enumerate().find(|(_, &a)| idx(a) >= n) {
        return Err(Error::format(format!("{field}[{i}]"), format!("index {} out of range (< {n})", idx(*a))));
    }
    Ok(())
}

fn compose_table(
    field: &str,
    entries: Vec<(BoxId, BoxId, BoxId)>,
    n: usize,
) -> Result<HashMap<(BoxId, BoxId), BoxId>> {
    let mut table = HashMap::new();
    for (i, (a, b, c)) in entries.into_iter().enumerate() {
        if a.0 >= n || b.0 >= n || c.0 >= n {
            return Err(Error::format(format!("{field}[{i}]"), "box index out of range"));
        }
        if table.insert((a, b), c).is_some() {
            return Err(Error::format(
                format!("{field}[{i}]"),
                format!("duplicate entry for ({}, {})", a.0, b.0),
            ));
        }
    }
    Ok(table)
}

impl DoubleGroupoid {
    /// Assembles a double groupoid from raw tables, rejecting only structural
    /// problems. Axioms, including domain exactness of the compositions, are
    /// checked by [`validate_double`].
    pub fn from_parts(p: DoubleParts) -> Result<Self> {
        if p.h.objects() != p.base || p.v.objects() != p.base {
            return Err(Error::format(
                "base",
                format!(
                    "base has {} objects but H has {} and V has {}",
                    p.base,
                    p.h.objects(),
                    p.v.objects()
                ),
            ));
        }
        let n = p.boxes;
        let (nh, nv) = (p.h.arrow_count(), p.v.arrow_count());
        for (field, table, len, range) in [
            ("t", &p.t, n, nh),
            ("b", &p.b, n, nh),
            ("l", &p.l, n, nv),
            ("r", &p.r, n, nv),
        ] {
            check_len(field, table, len)?;
            check_range(field, table, range, |a| a.0)?;
        }
        for (field, table, len) in [
            ("hid", &p.hid, nv),
            ("vid", &p.vid, nh),
            ("hinv", &p.hinv, n),
            ("vinv", &p.vinv, n),
        ] {
            check_len(field, table, len)?;
            check_range(field, table, n, |a| a.0)?;
        }
        let hcompose = compose_table("hcompose", p.hcompose, n)?;
        let vcompose = compose_table("vcompose", p.vcompose, n)?;
        let mut by_left = vec![Vec::new(); nv];
        let mut by_top = vec![Vec::new(); nh];
        let mut by_ur: HashMap<_, Vec<BoxId>> = HashMap::new();
        let mut by_frame: BTreeMap<_, Vec<BoxId>> = BTreeMap::new();
        for a in 0..n {
            let id = BoxId(a);
            by_left[p.l[a].0].push(id);
            by_top[p.t[a].0].push(id);
            by_ur.entry((p.t[a], p.r[a])).or_default().push(id);
            by_frame
                .entry(BoxFrame::new(p.t[a], p.l[a], p.r[a], p.b[a]))
                .or_default()
                .push(id);
        }
        Ok(DoubleGroupoid {
            base: p.base,
            h: p.h,
            v: p.v,
            t: p.t,
            b: p.b,
            l: p.l,
            r: p.r,
            hcompose,
            vcompose,
            hid: p.hid,
            vid: p.vid,
            hinv: p.hinv,
            vinv: p.vinv,
            by_left,
            by_top,
            by_ur,
            by_frame,
        })
    }

    pub fn to_parts(&self) -> DoubleParts {
        let sorted = |m: &HashMap<(BoxId, BoxId), BoxId>| {
            let mut v: Vec<_> = m.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
            v.sort_unstable();
            v
        };
        DoubleParts {
            base: self.base,
            h: self.h.clone(),
            v: self.v.clone(),
            boxes: self.len(),
            t: self.t.clone(),
            b: self.b.clone(),
            l: self.l.clone(),
            r: self.r.clone(),
            hcompose: sorted(&self.hcompose),
            vcompose: sorted(&self.vcompose),
            hid: self.hid.clone(),
            vid: self.vid.clone(),
            hinv: self.hinv.clone(),
            vinv: self.vinv.clone(),
        }
    }

    /// The slim double groupoid with the given frames as boxes, in order.
    ///
    /// Compositions, identities and inverses are computed sidewise; the frame
    /// set must be closed under them.
    pub fn from_frames(v: &FiniteGroupoid, h: &FiniteGroupoid, frames: Vec<BoxFrame>) -> Result<Self> {
        if v.objects() != h.objects() {
            return Err(Error::BaseMismatch(format!(
                "V has {} objects but H has {}",
                v.objects(),
                h.objects()
            )));
        }
        let index: HashMap<BoxFrame, BoxId> =
            frames.iter().enumerate().map(|(i, &f)| (f, BoxId(i))).collect();
        if index.len() != frames.len() {
            return Err(Error::Inconsistent("repeated frame".into()));
        }
        for fr in &frames {
            if !fr.matches(v, h) {
                return Err(Error::NotMatching(format!("{fr} does not close up")));
            }
        }
        let find = |fr: BoxFrame| {
            index
                .get(&fr)
                .copied()
                .ok_or_else(|| Error::Inconsistent(format!("frame set not closed: missing {fr}")))
        };
        let mut by_left: HashMap<ArrowId, Vec<BoxFrame>> = HashMap::new();
        let mut by_top: HashMap<ArrowId, Vec<BoxFrame>> = HashMap::new();
        for &fr in &frames {
            by_left.entry(fr.f).or_default().push(fr);
            by_top.entry(fr.x).or_default().push(fr);
        }
        let mut hcompose = Vec::new();
        let mut vcompose = Vec::new();
        for &a in &frames {
            for &bb in by_left.get(&a.g).into_iter().flatten() {
                let c = BoxFrame::new(h.compose(a.x, bb.x)?, a.f, bb.g, h.compose(a.y, bb.y)?);
                hcompose.push((index[&a], index[&bb], find(c)?));
            }
            for &bb in by_top.get(&a.y).into_iter().flatten() {
                let c = BoxFrame::new(a.x, v.compose(a.f, bb.f)?, v.compose(a.g, bb.g)?, bb.y);
                vcompose.push((index[&a], index[&bb], find(c)?));
            }
        }
        let hid = v
            .arrows()
            .map(|g| find(BoxFrame::new(h.identity(v.src(g)), g, g, h.identity(v.tgt(g)))))
            .collect::<Result<Vec<_>>>()?;
        let vid = h
            .arrows()
            .map(|x| find(BoxFrame::new(x, v.identity(h.src(x)), v.identity(h.tgt(x)), x)))
            .collect::<Result<Vec<_>>>()?;
        let hinv = frames
            .iter()
            .map(|fr| find(BoxFrame::new(h.inverse(fr.x), fr.g, fr.f, h.inverse(fr.y))))
            .collect::<Result<Vec<_>>>()?;
        let vinv = frames
            .iter()
            .map(|fr| find(BoxFrame::new(fr.y, v.inverse(fr.f), v.inverse(fr.g), fr.x)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(DoubleParts {
            base: v.objects(),
            h: h.clone(),
            v: v.clone(),
            boxes: frames.len(),
            t: frames.iter().map(|f| f.x).collect(),
            b: frames.iter().map(|f| f.y).collect(),
            l: frames.iter().map(|f| f.f).collect(),
            r: frames.iter().map(|f| f.g).collect(),
            hcompose,
            vcompose,
            hid,
            vid,
            hinv,
            vinv,
        })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.base).map(ObjectId)
    }

    pub fn h(&self) -> &FiniteGroupoid {
        &self.h
    }

    pub fn v(&self) -> &FiniteGroupoid {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn boxes(&self) -> impl Iterator<Item = BoxId> {
        (0..self.t.len()).map(BoxId)
    }

    pub fn t(&self, a: BoxId) -> ArrowId {
        self.t[a.0]
    }

    pub fn b(&self, a: BoxId) -> ArrowId {
        self.b[a.0]
    }

    pub fn l(&self, a: BoxId) -> ArrowId {
        self.l[a.0]
    }

    pub fn r(&self, a: BoxId) -> ArrowId {
        self.r[a.0]
    }

    pub fn tl(&self, a: BoxId) -> ObjectId {
        self.h.src(self.t(a))
    }

    pub fn tr(&self, a: BoxId) -> ObjectId {
        self.h.tgt(self.t(a))
    }

    pub fn bl(&self, a: BoxId) -> ObjectId {
        self.h.src(self.b(a))
    }

    pub fn br(&self, a: BoxId) -> ObjectId {
        self.h.tgt(self.b(a))
    }

    /// The vertex over which boxes are fibered for the core action.
    pub fn gamma(&self, a: BoxId) -> ObjectId {
        self.bl(a)
    }

    /// The frame `Π(A)`.
    pub fn pi(&self, a: BoxId) -> BoxFrame {
        BoxFrame::new(self.t(a), self.l(a), self.r(a), self.b(a))
    }

    pub fn try_hcompose(&self, a: BoxId, b: BoxId) -> Option<BoxId> {
        self.hcompose.get(&(a, b)).copied()
    }

    pub fn try_vcompose(&self, a: BoxId, b: BoxId) -> Option<BoxId> {
        self.vcompose.get(&(a, b)).copied()
    }

    /// `AB`, placing `B` to the right of `A`.
    pub fn hcompose(&self, a: BoxId, b: BoxId) -> Result<BoxId> {
        if self.r(a) != self.l(b) {
            return Err(Error::NotComposable(format!(
                "right side of {a} is {} but left side of {b} is {}",
                self.r(a),
                self.l(b)
            )));
        }
        self.try_hcompose(a, b)
            .ok_or_else(|| Error::NotComposable(format!("no horizontal entry for ({a}, {b})")))
    }

    /// `A/B`, placing `B` below `A`.
    pub fn vcompose(&self, a: BoxId, b: BoxId) -> Result<BoxId> {
        if self.b(a) != self.t(b) {
            return Err(Error::NotComposable(format!(
                "bottom of {a} is {} but top of {b} is {}",
                self.b(a),
                self.t(b)
            )));
        }
        self.try_vcompose(a, b)
            .ok_or_else(|| Error::NotComposable(format!("no vertical entry for ({a}, {b})")))
    }

    /// The horizontal identity on a vertical arrow.
    pub fn hid(&self, g: ArrowId) -> BoxId {
        self.hid[g.0]
    }

    /// The vertical identity on a horizontal arrow.
    pub fn vid(&self, x: ArrowId) -> BoxId {
        self.vid[x.0]
    }

    pub fn hinv(&self, a: BoxId) -> BoxId {
        self.hinv[a.0]
    }

    pub fn vinv(&self, a: BoxId) -> BoxId {
        self.vinv[a.0]
    }

    /// The doubly-identity box at `p`.
    pub fn theta(&self, p: ObjectId) -> BoxId {
        self.hid(self.v.identity(p))
    }

    /// Boxes whose left side is `g`, ascending.
    pub fn boxes_with_left(&self, g: ArrowId) -> &[BoxId] {
        &self.by_left[g.0]
    }

    /// Boxes whose top side is `x`, ascending.
    pub fn boxes_with_top(&self, x: ArrowId) -> &[BoxId] {
        &self.by_top[x.0]
    }

    /// `Ur(x, g)`: boxes with top `x` and right side `g`.
    pub fn ur_set(&self, x: ArrowId, g: ArrowId) -> Result<Vec<BoxId>> {
        if self.h.tgt(x) != self.v.src(g) {
            return Err(Error::NotMatching(format!(
                "{x} ends at {} but {g} starts at {}",
                self.h.tgt(x),
                self.v.src(g)
            )));
        }
        Ok(self.by_ur.get(&(x, g)).cloned().unwrap_or_default())
    }

    /// Boxes with the given frame, ascending.
    pub fn preimages(&self, fr: &BoxFrame) -> &[BoxId] {
        self.by_frame.get(fr).map_or(&[], Vec::as_slice)
    }

    /// Distinct frames of boxes, ascending.
    pub fn frames(&self) -> impl Iterator<Item = &BoxFrame> {
        self.by_frame.keys()
    }

    pub fn hcompose_entries(&self) -> impl Iterator<Item = (BoxId, BoxId, BoxId)> + '_ {
        self.hcompose.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn vcompose_entries(&self) -> impl Iterator<Item = (BoxId, BoxId, BoxId)> + '_ {
        self.vcompose.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn is_slim(&self) -> bool {
        self.by_frame.len() == self.len()
    }
}

/// The coarse double groupoid: every matching quadruple is a box.
pub fn coarse(v: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<DoubleGroupoid> {
    if v.objects() != h.objects() {
        return Err(Error::BaseMismatch(format!(
            "V has {} objects but H has {}",
            v.objects(),
            h.objects()
        )));
    }
    let mut frames = Vec::new();
    for x in h.arrows() {
        for &f in v.arrows_from(h.src(x)) {
            for &g in v.arrows_from(h.tgt(x)) {
                for y in h.hom(v.tgt(f), v.tgt(g)) {
                    frames.push(BoxFrame::new(x, f, g, y));
                }
            }
        }
    }
    DoubleGroupoid::from_frames(v, h, frames)
}

/// The frame of `d`: the image of `Π`, with boxes ordered by frame.
pub fn frame(d: &DoubleGroupoid) -> Result<DoubleGroupoid> {
    let report = check_frame_morphism(d);
    if !report.passed() {
        return Err(Error::Invalid(Box::new(report)));
    }
    DoubleGroupoid::from_frames(d.v(), d.h(), d.frames().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_counts() {
        let p2 = FiniteGroupoid::pair(2);
        assert_eq!(coarse(&p2, &p2).unwrap().len(), 16);
        let one = FiniteGroupoid::discrete(1);
        assert_eq!(coarse(&one, &one).unwrap().len(), 1);
        // vertical pair, horizontal discrete: x and y are identities, f and g
        // share their source and target
        let d = coarse(&p2, &FiniteGroupoid::discrete(2)).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.is_slim());
    }

    #[test]
    fn coarse_rejects_base_mismatch() {
        let err = coarse(&FiniteGroupoid::pair(2), &FiniteGroupoid::pair(3));
        assert!(matches!(err, Err(Error::BaseMismatch(_))));
    }

    #[test]
    fn coarse_frame_is_itself() {
        let p2 = FiniteGroupoid::pair(2);
        let d = coarse(&p2, &p2).unwrap();
        assert_eq!(frame(&d).unwrap(), d);
    }

    #[test]
    fn ur_set_rejects_mismatch() {
        let p2 = FiniteGroupoid::pair(2);
        let d = coarse(&p2, &p2).unwrap();
        let x = p2.hom(ObjectId(0), ObjectId(1))[0];
        let g = p2.hom(ObjectId(0), ObjectId(0))[0];
        assert!(matches!(d.ur_set(x, g), Err(Error::NotMatching(_))));
        let g = p2.hom(ObjectId(1), ObjectId(0))[0];
        assert_eq!(d.ur_set(x, g).unwrap().len(), 2);
    }

    #[test]
    fn coarse_compositions_are_sidewise() {
        let p2 = FiniteGroupoid::pair(2);
        let d = coarse(&p2, &p2).unwrap();
        for (a, b, c) in d.hcompose_entries() {
            assert_eq!(d.t(c), p2.compose(d.t(a), d.t(b)).unwrap());
            assert_eq!(d.l(c), d.l(a));
        }
        for a in d.boxes() {
            assert_eq!(d.hcompose(a, d.hinv(a)).unwrap(), d.hid(d.l(a)));
            assert_eq!(d.vcompose(a, d.vinv(a)).unwrap(), d.vid(d.t(a)));
        }
    }
}
