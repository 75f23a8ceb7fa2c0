//! Finite groupoids over a fixed base of objects.
//!
//! Composition is written left to right: `compose(g, h)` is defined when
//! `tgt(g) == src(h)` and goes from `src(g)` to `tgt(h)`. All maps are
//! explicit tables over dense indices.

mod action;
mod bundle;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{anchors, Check, Report};

pub use action::{isotropy, orbit, orbit_count_identity, validate_action, BundleAction};
pub use bundle::{validate_bundle, AbelianGroupBundle, ElemId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArrowId(pub usize);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

impl fmt::Display for ArrowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: usize,
    src: Vec<ObjectId>,
    tgt: Vec<ObjectId>,
    compose: HashMap<(ArrowId, ArrowId), ArrowId>,
    identity: Vec<ArrowId>,
    inverse: Vec<ArrowId>,
    outgoing: Vec<Vec<ArrowId>>,
    incoming: Vec<Vec<ArrowId>>,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw tables.
    ///
    /// Only structural problems are rejected here (index ranges, table
    /// lengths, duplicate or mis-chained composition entries). Axioms are
    /// checked by [`validate_groupoid`].
    pub fn from_parts(
        objects: usize,
        arrows: Vec<(ObjectId, ObjectId)>,
        compose: impl IntoIterator<Item = (ArrowId, ArrowId, ArrowId)>,
        identity: Vec<ArrowId>,
        inverse: Vec<ArrowId>,
    ) -> Result<Self> {
        if objects == 0 {
            return Err(Error::format("objects", "the base must be nonempty"));
        }
        let n = arrows.len();
        for (i, &(s, t)) in arrows.iter().enumerate() {
            if s.0 >= objects || t.0 >= objects {
                return Err(Error::format(
                    format!("arrows[{i}]"),
                    format!("endpoint out of range (objects = {objects})"),
                ));
            }
        }
        if identity.len() != objects {
            return Err(Error::format(
                "identity",
                format!("expected {objects} entries, found {}", identity.len()),
            ));
        }
        if inverse.len() != n {
            return Err(Error::format(
                "inverse",
                format!("expected {n} entries, found {}", inverse.len()),
            ));
        }
        for (field, table) in [("identity", &identity), ("inverse", &inverse)] {
            if let Some((i, a)) = table.iter().enumerate().find(|(_, a)| a.0 >= n) {
                return Err(Error::format(
                    format!("{field}[{i}]"),
                    format!("arrow {} out of range", a.0),
                ));
            }
        }
        let (src, tgt): (Vec<_>, Vec<_>) = arrows.into_iter().unzip();
        let mut table = HashMap::new();
        for (i, (a, b, c)) in compose.into_iter().enumerate() {
            if a.0 >= n || b.0 >= n || c.0 >= n {
                return Err(Error::format(
                    format!("compose[{i}]"),
                    "arrow index out of range",
                ));
            }
            if tgt[a.0] != src[b.0] {
                return Err(Error::format(
                    format!("compose[{i}]"),
                    format!(
                        "arrows {} and {} are not composable: target {} differs from source {}",
                        a.0, b.0, tgt[a.0], src[b.0]
                    ),
                ));
            }
            if table.insert((a, b), c).is_some() {
                return Err(Error::format(
                    format!("compose[{i}]"),
                    format!("duplicate entry for ({}, {})", a.0, b.0),
                ));
            }
        }
        let mut outgoing = vec![Vec::new(); objects];
        let mut incoming = vec![Vec::new(); objects];
        for a in 0..n {
            outgoing[src[a].0].push(ArrowId(a));
            incoming[tgt[a].0].push(ArrowId(a));
        }
        Ok(FiniteGroupoid {
            objects,
            src,
            tgt,
            compose: table,
            identity,
            inverse,
            outgoing,
            incoming,
        })
    }

    /// Builds a groupoid from its arrows and a multiplication rule defined on
    /// every composable pair; identities and inverses are found by search.
    pub fn generate(
        objects: usize,
        arrows: Vec<(ObjectId, ObjectId)>,
        mut mul: impl FnMut(ArrowId, ArrowId) -> ArrowId,
    ) -> Result<Self> {
        let n = arrows.len();
        let mut compose = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if arrows[a].1 == arrows[b].0 {
                    compose.push((ArrowId(a), ArrowId(b), mul(ArrowId(a), ArrowId(b))));
                }
            }
        }
        let table: HashMap<_, _> = compose.iter().map(|&(a, b, c)| ((a, b), c)).collect();
        let mut identity = Vec::with_capacity(objects);
        for p in 0..objects {
            let e = (0..n)
                .map(ArrowId)
                .find(|&e| {
                    arrows[e.0] == (ObjectId(p), ObjectId(p)) && table.get(&(e, e)) == Some(&e)
                })
                .ok_or_else(|| Error::Inconsistent(format!("no identity arrow at object {p}")))?;
            identity.push(e);
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let (s, t) = arrows[a];
            let inv = (0..n)
                .map(ArrowId)
                .find(|&b| {
                    arrows[b.0] == (t, s) && table.get(&(ArrowId(a), b)) == Some(&identity[s.0])
                })
                .ok_or_else(|| Error::Inconsistent(format!("arrow {a} has no inverse")))?;
            inverse.push(inv);
        }
        Self::from_parts(objects, arrows, compose, identity, inverse)
    }

    /// The discrete groupoid: identities only.
    pub fn discrete(objects: usize) -> Self {
        let arrows = (0..objects).map(|p| (ObjectId(p), ObjectId(p))).collect();
        Self::generate(objects, arrows, |a, _| a).expect("discrete groupoid")
    }

    /// The pair (coarse) groupoid: exactly one arrow between any two objects.
    ///
    /// Arrow `p * objects + q` goes from `p` to `q`.
    pub fn pair(objects: usize) -> Self {
        let arrows = (0..objects)
            .flat_map(|p| (0..objects).map(move |q| (ObjectId(p), ObjectId(q))))
            .collect();
        Self::generate(objects, arrows, |a, b| {
            let p = a.0 / objects;
            let r = b.0 % objects;
            ArrowId(p * objects + r)
        })
        .expect("pair groupoid")
    }

    /// A one-object group given by its multiplication table.
    pub fn from_group_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|row| row.len() != n || row.iter().any(|&c| c >= n)) {
            return Err(Error::format("group table", "table must be square with entries in range"));
        }
        let arrows = vec![(ObjectId(0), ObjectId(0)); n];
        Self::generate(1, arrows, |a, b| ArrowId(table[a.0][b.0]))
    }

    /// The cyclic group of order `n`, arrow `k` standing for `r^k`.
    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_group_table(&table).expect("cyclic group")
    }

    /// Disjoint union; objects and arrows of `other` are shifted past `self`'s.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> Self {
        let (po, pa) = (self.objects, self.arrow_count());
        let mut arrows: Vec<_> = self.arrows().map(|a| (self.src(a), self.tgt(a))).collect();
        arrows.extend(
            other
                .arrows()
                .map(|a| (ObjectId(other.src(a).0 + po), ObjectId(other.tgt(a).0 + po))),
        );
        let mut compose: Vec<_> = self.compose_entries();
        compose.extend(
            other
                .compose_entries()
                .into_iter()
                .map(|(a, b, c)| (ArrowId(a.0 + pa), ArrowId(b.0 + pa), ArrowId(c.0 + pa))),
        );
        let mut identity = self.identity.clone();
        identity.extend(other.identity.iter().map(|a| ArrowId(a.0 + pa)));
        let mut inverse = self.inverse.clone();
        inverse.extend(other.inverse.iter().map(|a| ArrowId(a.0 + pa)));
        Self::from_parts(po + other.objects, arrows, compose, identity, inverse)
            .expect("union of valid tables")
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.objects).map(ObjectId)
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.src.len()).map(ArrowId)
    }

    pub fn src(&self, a: ArrowId) -> ObjectId {
        self.src[a.0]
    }

    pub fn tgt(&self, a: ArrowId) -> ObjectId {
        self.tgt[a.0]
    }

    pub fn identity(&self, p: ObjectId) -> ArrowId {
        self.identity[p.0]
    }

    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverse[a.0]
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        self.identity[self.src[a.0].0] == a
    }

    /// The table entry for `gh`, if any.
    pub fn try_compose(&self, g: ArrowId, h: ArrowId) -> Option<ArrowId> {
        self.compose.get(&(g, h)).copied()
    }

    pub fn compose(&self, g: ArrowId, h: ArrowId) -> Result<ArrowId> {
        if self.tgt(g) != self.src(h) {
            return Err(Error::NotComposable(format!(
                "target of {g} is {} but source of {h} is {}",
                self.tgt(g),
                self.src(h)
            )));
        }
        self.try_compose(g, h)
            .ok_or_else(|| Error::NotComposable(format!("no table entry for ({g}, {h})")))
    }

    /// Arrows with source `p`, ascending.
    pub fn arrows_from(&self, p: ObjectId) -> &[ArrowId] {
        &self.outgoing[p.0]
    }

    /// Arrows with target `p`, ascending.
    pub fn arrows_into(&self, p: ObjectId) -> &[ArrowId] {
        &self.incoming[p.0]
    }

    pub fn hom(&self, p: ObjectId, q: ObjectId) -> Vec<ArrowId> {
        self.outgoing[p.0]
            .iter()
            .copied()
            .filter(|&a| self.tgt(a) == q)
            .collect()
    }

    /// The vertex group at `p`.
    pub fn vertex_group(&self, p: ObjectId) -> Vec<ArrowId> {
        self.hom(p, p)
    }

    /// All composition entries, sorted.
    pub fn compose_entries(&self) -> Vec<(ArrowId, ArrowId, ArrowId)> {
        let mut v: Vec<_> = self.compose.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_discrete(&self) -> bool {
        self.arrow_count() == self.objects
    }

    pub fn is_connected(&self) -> bool {
        components(self).len() == 1
    }
}

/// Exhaustively checks the groupoid axioms.
pub fn validate_groupoid(g: &FiniteGroupoid) -> Report {
    let a = anchors::GROUPOID_AXIOMS;
    let mut report = Report::new("groupoid");

    let mut ident = Check::new("identity endpoints", a);
    for p in g.object_ids() {
        let e = g.identity(p);
        ident.case(g.src(e) == p && g.tgt(e) == p, || {
            format!("identity({p}) = {e} goes {} -> {}", g.src(e), g.tgt(e))
        });
    }

    let mut domain = Check::new("composition defined exactly on composable pairs", a);
    let mut ends = Check::new("composite endpoints", a);
    for x in g.arrows() {
        for &y in g.arrows_from(g.tgt(x)) {
            match g.try_compose(x, y) {
                None => domain.fail(|| format!("({x}, {y}) is composable but has no entry")),
                Some(z) => {
                    domain.case(true, String::new);
                    ends.case(g.src(z) == g.src(x) && g.tgt(z) == g.tgt(y), || {
                        format!("{x}{y} = {z} has wrong endpoints")
                    });
                }
            }
        }
    }
    for (x, y) in g.compose.keys() {
        if g.tgt(*x) != g.src(*y) {
            domain.fail(|| format!("({x}, {y}) has an entry but is not composable"));
        }
    }

    let mut neutral = Check::new("identities are neutral", a);
    let mut inverse = Check::new("inverse law", a);
    for x in g.arrows() {
        let (s, t) = (g.src(x), g.tgt(x));
        neutral.case(g.try_compose(g.identity(s), x) == Some(x), || {
            format!("id({s}) * {x} != {x}")
        });
        neutral.case(g.try_compose(x, g.identity(t)) == Some(x), || {
            format!("{x} * id({t}) != {x}")
        });
        let xi = g.inverse(x);
        inverse.case(g.try_compose(x, xi) == Some(g.identity(s)), || {
            format!("{x} * inverse {xi} != id({s})")
        });
        inverse.case(g.try_compose(xi, x) == Some(g.identity(t)), || {
            format!("inverse {xi} * {x} != id({t})")
        });
    }

    let mut assoc = Check::new("associativity", a);
    for x in g.arrows() {
        for &y in g.arrows_from(g.tgt(x)) {
            for &z in g.arrows_from(g.tgt(y)) {
                let lhs = g.try_compose(x, y).and_then(|xy| g.try_compose(xy, z));
                let rhs = g.try_compose(y, z).and_then(|yz| g.try_compose(x, yz));
                assoc.case(lhs.is_some() && lhs == rhs, || {
                    format!("({x}{y}){z} = {lhs:?} but {x}({y}{z}) = {rhs:?}")
                });
            }
        }
    }

    for c in [ident, domain, ends, neutral, inverse, assoc] {
        report.push(c);
    }
    report
}

/// Connected components of the base, each block ascending, blocks ordered by
/// their least object.
pub fn components(g: &FiniteGroupoid) -> Vec<Vec<ObjectId>> {
    let mut parent: Vec<usize> = (0..g.objects()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in g.arrows() {
        let (s, t) = (find(&mut parent, g.src(a).0), find(&mut parent, g.tgt(a).0));
        if s != t {
            parent[s.max(t)] = s.min(t);
        }
    }
    let mut blocks: Vec<Vec<ObjectId>> = Vec::new();
    let mut index: HashMap<usize, usize> = HashMap::new();
    for p in 0..g.objects() {
        let root = find(&mut parent, p);
        let k = *index.entry(root).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[k].push(ObjectId(p));
    }
    blocks
}

/// The component containing `p`.
pub fn component_of(g: &FiniteGroupoid, p: ObjectId) -> Vec<ObjectId> {
    components(g)
        .into_iter()
        .find(|b| b.contains(&p))
        .expect("every object lies in a component")
}

/// Checks that `k` is a subgroup of the vertex group at `q`.
pub fn check_subgroup(g: &FiniteGroupoid, q: ObjectId, k: &[ArrowId]) -> Result<()> {
    let set: BTreeSet<ArrowId> = k.iter().copied().collect();
    if let Some(a) = set.iter().find(|a| a.0 >= g.arrow_count()) {
        return Err(Error::NotASubgroup(format!("{a} is not an arrow")));
    }
    if let Some(a) = set.iter().find(|&&a| g.src(a) != q || g.tgt(a) != q) {
        return Err(Error::NotASubgroup(format!("{a} is not a loop at {q}")));
    }
    if !set.contains(&g.identity(q)) {
        return Err(Error::NotASubgroup(format!("missing identity at {q}")));
    }
    for &x in &set {
        if !set.contains(&g.inverse(x)) {
            return Err(Error::NotASubgroup(format!("not closed under inverse at {x}")));
        }
        for &y in &set {
            let z = g.compose(x, y)?;
            if !set.contains(&z) {
                return Err(Error::NotASubgroup(format!("{x}{y} = {z} escapes")));
            }
        }
    }
    Ok(())
}

/// Counts the classes of `g ≡ h ⇔ g⁻¹h ∈ K` on the arrows with target `q`.
///
/// The count is obtained by enumeration and cross-checked against
/// `|component(q)| · |G(q)| / |K|`.
pub fn coset_count(g: &FiniteGroupoid, q: ObjectId, k: &[ArrowId]) -> Result<usize> {
    check_subgroup(g, q, k)?;
    let ks: HashSet<ArrowId> = k.iter().copied().collect();
    let into = g.arrows_into(q);
    let mut seen: HashSet<ArrowId> = HashSet::new();
    let mut classes = 0;
    for &x in into {
        if seen.contains(&x) {
            continue;
        }
        classes += 1;
        let xi = g.inverse(x);
        for &y in into {
            if g.src(x) == g.src(y) {
                let z = g.compose(xi, y)?;
                if ks.contains(&z) {
                    seen.insert(y);
                }
            }
        }
    }
    let formula = component_of(g, q).len() * g.vertex_group(q).len() / ks.len();
    if classes != formula {
        return Err(Error::Inconsistent(format!(
            "coset count {classes} differs from the counting formula {formula}"
        )));
    }
    Ok(classes)
}

/// An identity-on-objects functor, stored as its arrow map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupoidMorphism {
    pub arrow_map: Vec<ArrowId>,
}

impl GroupoidMorphism {
    pub fn new(arrow_map: Vec<ArrowId>) -> Self {
        GroupoidMorphism { arrow_map }
    }

    pub fn apply(&self, a: ArrowId) -> ArrowId {
        self.arrow_map[a.0]
    }

    pub fn is_injective(&self) -> bool {
        let set: HashSet<_> = self.arrow_map.iter().collect();
        set.len() == self.arrow_map.len()
    }
}

/// Checks that `m` is an identity-on-objects functor `dom → cod`.
pub fn validate_morphism(dom: &FiniteGroupoid, cod: &FiniteGroupoid, m: &GroupoidMorphism) -> Report {
    let a = anchors::GROUPOID_AXIOMS;
    let mut report = Report::new("groupoid morphism");
    let mut shape = Check::new("morphism table shape", a);
    shape.case(dom.objects() == cod.objects(), || {
        format!("bases differ: {} vs {}", dom.objects(), cod.objects())
    });
    shape.case(m.arrow_map.len() == dom.arrow_count(), || {
        format!("{} entries for {} arrows", m.arrow_map.len(), dom.arrow_count())
    });
    shape.case(m.arrow_map.iter().all(|b| b.0 < cod.arrow_count()), || {
        "image arrow out of range".into()
    });
    if !shape.passed() {
        report.push(shape);
        return report;
    }
    report.push(shape);

    let mut ends = Check::new("identity on objects", a);
    let mut ids = Check::new("preserves identities", a);
    let mut comp = Check::new("preserves composition", a);
    for x in dom.arrows() {
        let fx = m.apply(x);
        ends.case(cod.src(fx) == dom.src(x) && cod.tgt(fx) == dom.tgt(x), || {
            format!("{x} maps to {fx} with different endpoints")
        });
    }
    for p in dom.object_ids() {
        ids.case(m.apply(dom.identity(p)) == cod.identity(p), || {
            format!("identity at {p} not preserved")
        });
    }
    for (x, y, z) in dom.compose_entries() {
        let image = cod.try_compose(m.apply(x), m.apply(y));
        comp.case(image == Some(m.apply(z)), || {
            format!("f({x}{y}) = {} but f({x})f({y}) = {image:?}", m.apply(z))
        });
    }
    report.push(ends);
    report.push(ids);
    report.push(comp);
    report
}

/// Searches for an identity-on-objects isomorphism `a → b`.
pub fn groupoid_iso(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Option<GroupoidMorphism> {
    let mut found = None;
    for_each_groupoid_iso(a, b, &mut |m| {
        found = Some(m.clone());
        true
    });
    found
}

/// Calls `visit` with every identity-on-objects isomorphism `a → b` until it
/// returns `true`. Returns whether the visitor stopped the search.
pub fn for_each_groupoid_iso(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    visit: &mut dyn FnMut(&GroupoidMorphism) -> bool,
) -> bool {
    if a.objects() != b.objects() || a.arrow_count() != b.arrow_count() {
        return false;
    }
    for p in a.object_ids() {
        for q in a.object_ids() {
            if a.hom(p, q).len() != b.hom(p, q).len() {
                return false;
            }
        }
    }
    let mut state = IsoState {
        fwd: vec![None; a.arrow_count()],
        bwd: vec![None; b.arrow_count()],
    };
    for p in a.object_ids() {
        if !state.assign(a, b, a.identity(p), b.identity(p)) {
            return false;
        }
    }
    search_groupoid_iso(a, b, state, visit)
}

#[derive(Clone)]
struct IsoState {
    fwd: Vec<Option<ArrowId>>,
    bwd: Vec<Option<ArrowId>>,
}

impl IsoState {
    /// Assigns `x ↦ y` and closes the map under composition and inverses.
    fn assign(&mut self, a: &FiniteGroupoid, b: &FiniteGroupoid, x: ArrowId, y: ArrowId) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match (self.fwd[x.0], self.bwd[y.0]) {
                (Some(y0), _) if y0 != y => return false,
                (_, Some(x0)) if x0 != x => return false,
                (Some(_), Some(_)) => continue,
                _ => {}
            }
            if a.src(x) != b.src(y) || a.tgt(x) != b.tgt(y) {
                return false;
            }
            self.fwd[x.0] = Some(y);
            self.bwd[y.0] = Some(x);
            queue.push((a.inverse(x), b.inverse(y)));
            let assigned: Vec<ArrowId> = a.arrows().filter(|z| self.fwd[z.0].is_some()).collect();
            for z in assigned {
                let fz = self.fwd[z.0].unwrap();
                if a.tgt(x) == a.src(z) {
                    match (a.try_compose(x, z), b.try_compose(y, fz)) {
                        (Some(l), Some(r)) => queue.push((l, r)),
                        _ => return false,
                    }
                }
                if a.tgt(z) == a.src(x) {
                    match (a.try_compose(z, x), b.try_compose(fz, y)) {
                        (Some(l), Some(r)) => queue.push((l, r)),
                        _ => return false,
                    }
                }
            }
        }
        true
    }
}

fn search_groupoid_iso(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    state: IsoState,
    visit: &mut dyn FnMut(&GroupoidMorphism) -> bool,
) -> bool {
    let Some(x) = a.arrows().find(|x| state.fwd[x.0].is_none()) else {
        let m = GroupoidMorphism::new(state.fwd.iter().map(|y| y.unwrap()).collect());
        return visit(&m);
    };
    for y in b.hom(a.src(x), a.tgt(x)) {
        if state.bwd[y.0].is_some() {
            continue;
        }
        let mut next = state.clone();
        if next.assign(a, b, x, y) && search_groupoid_iso(a, b, next, visit) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_inverse_composes_to_identity() {
        let g = FiniteGroupoid::pair(2);
        let a01 = g.hom(ObjectId(0), ObjectId(1))[0];
        let a10 = g.hom(ObjectId(1), ObjectId(0))[0];
        assert_eq!(g.compose(a01, a10).unwrap(), g.identity(ObjectId(0)));
    }

    #[test]
    fn cyclic_three_squares_generator() {
        let g = FiniteGroupoid::cyclic(3);
        // r * r = r^2 by the table of Z/3
        assert_eq!(g.compose(ArrowId(1), ArrowId(1)).unwrap(), ArrowId(2));
    }

    #[test]
    fn composing_with_target_identity_is_noop() {
        let g = FiniteGroupoid::pair(3);
        for a in g.arrows() {
            assert_eq!(g.compose(a, g.identity(g.tgt(a))).unwrap(), a);
        }
    }

    #[test]
    fn compose_rejects_mismatched_endpoints() {
        let g = FiniteGroupoid::pair(2);
        let a01 = g.hom(ObjectId(0), ObjectId(1))[0];
        assert!(matches!(g.compose(a01, a01), Err(Error::NotComposable(_))));
    }

    #[test]
    fn components_of_small_groupoids() {
        assert_eq!(components(&FiniteGroupoid::pair(3)).len(), 1);
        let two = FiniteGroupoid::cyclic(2).disjoint_union(&FiniteGroupoid::cyclic(3));
        assert_eq!(components(&two), vec![vec![ObjectId(0)], vec![ObjectId(1)]]);
        assert_eq!(
            components(&FiniteGroupoid::discrete(2)),
            vec![vec![ObjectId(0)], vec![ObjectId(1)]]
        );
    }

    #[test]
    fn coset_counts() {
        let pair = FiniteGroupoid::pair(2);
        let q = ObjectId(1);
        assert_eq!(coset_count(&pair, q, &[pair.identity(q)]).unwrap(), 2);
        let c3 = FiniteGroupoid::cyclic(3);
        let all: Vec<_> = c3.arrows().collect();
        assert_eq!(coset_count(&c3, ObjectId(0), &all).unwrap(), 1);
        assert_eq!(coset_count(&c3, ObjectId(0), &[ArrowId(0)]).unwrap(), 3);
    }

    #[test]
    fn coset_count_rejects_non_subgroups() {
        let c3 = FiniteGroupoid::cyclic(3);
        assert!(matches!(
            coset_count(&c3, ObjectId(0), &[ArrowId(0), ArrowId(1)]),
            Err(Error::NotASubgroup(_))
        ));
    }

    #[test]
    fn valid_groupoids_pass() {
        assert!(validate_groupoid(&FiniteGroupoid::pair(2)).passed());
        assert!(validate_groupoid(&FiniteGroupoid::from_group_table(&crate::fixtures::s3_table()).unwrap()).passed());
    }

    #[test]
    fn corrupted_entry_breaks_associativity_with_witness() {
        let g = FiniteGroupoid::cyclic(3);
        let mut entries = g.compose_entries();
        // r * r = r^2 becomes r * r = 1
        let pos = entries
            .iter()
            .position(|&(a, b, _)| a == ArrowId(1) && b == ArrowId(1))
            .unwrap();
        entries[pos].2 = ArrowId(0);
        let arrows = g.arrows().map(|a| (g.src(a), g.tgt(a))).collect();
        let bad = FiniteGroupoid::from_parts(
            1,
            arrows,
            entries,
            vec![ArrowId(0)],
            vec![ArrowId(0), ArrowId(2), ArrowId(1)],
        )
        .unwrap();
        let report = validate_groupoid(&bad);
        let assoc = report.check("associativity").unwrap();
        assert!(!assoc.passed());
        assert!(assoc.witnesses[0].contains(')'));
    }

    #[test]
    fn from_parts_rejects_mischained_triple() {
        let g = FiniteGroupoid::pair(2);
        let arrows = g.arrows().map(|a| (g.src(a), g.tgt(a))).collect();
        let a01 = g.hom(ObjectId(0), ObjectId(1))[0];
        let mut entries = g.compose_entries();
        entries.push((a01, a01, a01));
        let err = FiniteGroupoid::from_parts(2, arrows, entries, g.identity.clone(), g.inverse.clone());
        assert!(matches!(err, Err(Error::Format { .. })));
    }

    #[test]
    fn s3_automorphisms_fixing_nothing_extra() {
        let s3 = FiniteGroupoid::from_group_table(&crate::fixtures::s3_table()).unwrap();
        let mut count = 0;
        for_each_groupoid_iso(&s3, &s3, &mut |m| {
            assert!(validate_morphism(&s3, &s3, m).passed());
            count += 1;
            false
        });
        // |Aut(S3)| = 6
        assert_eq!(count, 6);
    }

    #[test]
    fn iso_search_separates_non_isomorphic_groups() {
        let c6 = FiniteGroupoid::cyclic(6);
        let s3 = FiniteGroupoid::from_group_table(&crate::fixtures::s3_table()).unwrap();
        assert!(groupoid_iso(&c6, &s3).is_none());
        assert!(groupoid_iso(&c6, &c6).is_some());
    }
}
