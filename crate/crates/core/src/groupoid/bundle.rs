use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ObjectId;
use crate::error::{Error, Result};
use crate::report::{anchors, Check, Report};

/// An element of a bundle, indexed globally across all fibers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemId(pub usize);

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}", self.0)
    }
}

/// A family of finite abelian groups indexed by the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupBundle {
    base: usize,
    fiber: Vec<ObjectId>,
    op: HashMap<(ElemId, ElemId), ElemId>,
    neutral: Vec<ElemId>,
    neg: Vec<ElemId>,
    members: Vec<Vec<ElemId>>,
}

impl AbelianGroupBundle {
    pub fn from_parts(
        base: usize,
        fiber: Vec<ObjectId>,
        op: impl IntoIterator<Item = (ElemId, ElemId, ElemId)>,
        neutral: Vec<ElemId>,
        neg: Vec<ElemId>,
    ) -> Result<Self> {
        let n = fiber.len();
        if let Some((i, p)) = fiber.iter().enumerate().find(|(_, p)| p.0 >= base) {
            return Err(Error::format(format!("fiber[{i}]"), format!("object {} out of range", p.0)));
        }
        if neutral.len() != base {
            return Err(Error::format(
                "neutral",
                format!("expected {base} entries, found {}", neutral.len()),
            ));
        }
        if neg.len() != n {
            return Err(Error::format("neg", format!("expected {n} entries, found {}", neg.len())));
        }
        for (field, table) in [("neutral", &neutral), ("neg", &neg)] {
            if let Some((i, e)) = table.iter().enumerate().find(|(_, e)| e.0 >= n) {
                return Err(Error::format(format!("{field}[{i}]"), format!("element {} out of range", e.0)));
            }
        }
        let mut table = HashMap::new();
        for (i, (a, b, c)) in op.into_iter().enumerate() {
            if a.0 >= n || b.0 >= n || c.0 >= n {
                return Err(Error::format(format!("op[{i}]"), "element index out of range"));
            }
            if fiber[a.0] != fiber[b.0] {
                return Err(Error::format(
                    format!("op[{i}]"),
                    format!("elements {} and {} lie in different fibers", a.0, b.0),
                ));
            }
            if table.insert((a, b), c).is_some() {
                return Err(Error::format(format!("op[{i}]"), format!("duplicate entry for ({}, {})", a.0, b.0)));
            }
        }
        let mut members = vec![Vec::new(); base];
        for (e, p) in fiber.iter().enumerate() {
            members[p.0].push(ElemId(e));
        }
        Ok(AbelianGroupBundle {
            base,
            fiber,
            op: table,
            neutral,
            neg,
            members,
        })
    }

    /// Builds a bundle from per-object cyclic orders: the fiber over `p` is
    /// `Z/orders[p]`, element `k` of that fiber standing for the residue `k`.
    pub fn cyclic(orders: &[usize]) -> Self {
        let mut fiber = Vec::new();
        let mut neutral = Vec::new();
        let mut offsets = Vec::new();
        for (p, &n) in orders.iter().enumerate() {
            assert!(n > 0, "fiber orders must be positive");
            offsets.push(fiber.len());
            neutral.push(ElemId(fiber.len()));
            fiber.extend(std::iter::repeat_n(ObjectId(p), n));
        }
        let mut op = Vec::new();
        let mut neg = vec![ElemId(0); fiber.len()];
        for (p, &n) in orders.iter().enumerate() {
            let o = offsets[p];
            for a in 0..n {
                neg[o + a] = ElemId(o + (n - a) % n);
                for b in 0..n {
                    op.push((ElemId(o + a), ElemId(o + b), ElemId(o + (a + b) % n)));
                }
            }
        }
        Self::from_parts(orders.len(), fiber, op, neutral, neg).expect("cyclic bundle")
    }

    /// The same cyclic group `Z/n` over every object.
    pub fn constant_cyclic(base: usize, n: usize) -> Self {
        Self::cyclic(&vec![n; base])
    }

    pub fn trivial(base: usize) -> Self {
        Self::constant_cyclic(base, 1)
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.fiber.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fiber.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        (0..self.fiber.len()).map(ElemId)
    }

    /// The projection `p`.
    pub fn fiber_of(&self, e: ElemId) -> ObjectId {
        self.fiber[e.0]
    }

    pub fn fiber(&self, p: ObjectId) -> &[ElemId] {
        &self.members[p.0]
    }

    pub fn neutral(&self, p: ObjectId) -> ElemId {
        self.neutral[p.0]
    }

    pub fn neg(&self, e: ElemId) -> ElemId {
        self.neg[e.0]
    }

    pub fn try_add(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        self.op.get(&(a, b)).copied()
    }

    pub fn add(&self, a: ElemId, b: ElemId) -> Result<ElemId> {
        if self.fiber_of(a) != self.fiber_of(b) {
            return Err(Error::NotComposable(format!(
                "{a} lies over {} but {b} lies over {}",
                self.fiber_of(a),
                self.fiber_of(b)
            )));
        }
        self.try_add(a, b)
            .ok_or_else(|| Error::NotComposable(format!("no table entry for ({a}, {b})")))
    }

    pub fn projection(&self) -> &[ObjectId] {
        &self.fiber
    }

    /// All table entries, sorted.
    pub fn op_entries(&self) -> Vec<(ElemId, ElemId, ElemId)> {
        let mut v: Vec<_> = self.op.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort_unstable();
        v
    }
}

/// Exhaustively checks the bundle axioms fiber by fiber.
pub fn validate_bundle(k: &AbelianGroupBundle) -> Report {
    let a = anchors::BUNDLE_AXIOMS;
    let mut report = Report::new("abelian group bundle");
    let mut neutral_fiber = Check::new("neutral lies in its fiber", a);
    for p in (0..k.base()).map(ObjectId) {
        let e = k.neutral(p);
        neutral_fiber.case(k.fiber_of(e) == p, || format!("neutral({p}) = {e} lies over {}", k.fiber_of(e)));
    }
    let mut domain = Check::new("operation defined exactly on each fiber", a);
    let mut closed = Check::new("operation stays in the fiber", a);
    let mut comm = Check::new("commutativity", a);
    let mut unit = Check::new("neutral element", a);
    let mut inv = Check::new("negation", a);
    let mut assoc = Check::new("associativity", a);
    for p in (0..k.base()).map(ObjectId) {
        let f = k.fiber(p);
        for &x in f {
            for &y in f {
                match k.try_add(x, y) {
                    Some(z) => {
                        domain.case(true, String::new);
                        closed.case(k.fiber_of(z) == p, || format!("{x}+{y} = {z} leaves the fiber over {p}"));
                    }
                    None => domain.fail(|| format!("no entry for ({x}, {y})")),
                }
                if y > x {
                    let (xy, yx) = (k.try_add(x, y), k.try_add(y, x));
                    comm.case(xy == yx, || format!("{x}+{y} = {xy:?} but {y}+{x} = {yx:?}"));
                }
            }
            let e = k.neutral(p);
            unit.case(k.try_add(e, x) == Some(x) && k.try_add(x, e) == Some(x), || {
                format!("neutral {e} does not fix {x}")
            });
            let nx = k.neg(x);
            inv.case(k.fiber_of(nx) == p && k.try_add(x, nx) == Some(e), || {
                format!("{x} + neg {nx} is not neutral")
            });
        }
        for &x in f {
            for &y in f {
                for &z in f {
                    let lhs = k.try_add(x, y).and_then(|xy| k.try_add(xy, z));
                    let rhs = k.try_add(y, z).and_then(|yz| k.try_add(x, yz));
                    assoc.case(lhs.is_some() && lhs == rhs, || {
                        format!("({x}+{y})+{z} = {lhs:?} but {x}+({y}+{z}) = {rhs:?}")
                    });
                }
            }
        }
    }
    for c in [neutral_fiber, domain, closed, comm, unit, inv, assoc] {
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_bundle_is_valid() {
        let k = AbelianGroupBundle::cyclic(&[2, 3, 1]);
        assert_eq!(k.len(), 6);
        assert_eq!(k.fiber(ObjectId(1)).len(), 3);
        assert!(validate_bundle(&k).passed());
        let one = k.fiber(ObjectId(1))[1];
        let two = k.fiber(ObjectId(1))[2];
        assert_eq!(k.add(one, one).unwrap(), two);
        assert_eq!(k.neg(one), two);
    }

    #[test]
    fn non_commuting_entry_fails() {
        let k = AbelianGroupBundle::constant_cyclic(1, 3);
        let mut op = k.op_entries();
        let pos = op.iter().position(|&(a, b, _)| a == ElemId(1) && b == ElemId(2)).unwrap();
        op[pos].2 = ElemId(1);
        let bad = AbelianGroupBundle::from_parts(1, k.fiber.clone(), op, k.neutral.clone(), k.neg.clone())
            .unwrap();
        let report = validate_bundle(&bad);
        assert!(!report.check("commutativity").unwrap().passed());
    }

    #[test]
    fn cross_fiber_entry_is_a_format_error() {
        let k = AbelianGroupBundle::constant_cyclic(2, 2);
        let mut op = k.op_entries();
        op.push((ElemId(0), ElemId(2), ElemId(0)));
        let err = AbelianGroupBundle::from_parts(2, k.fiber.clone(), op, k.neutral.clone(), k.neg.clone());
        assert!(matches!(err, Err(Error::Format { .. })));
    }
}
