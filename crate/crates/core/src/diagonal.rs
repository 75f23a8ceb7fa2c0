//! Diagrams `V → D ← H`, their square double groupoids, and the diagonal
//! groupoid of a slim double groupoid with filling.
//!
//! The diagonal groupoid is computed in a finite pair model: its arrows are
//! classes of composable pairs `(g, x)`, standing for `j(g) i(x)`, where two
//! pairs are identified when a core box relates them. Products are computed
//! through filling boxes and checked against every possible choice.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::double::{has_filling, BoxFrame, BoxId, DoubleGroupoid};
use crate::error::{Error, Result};
use crate::groupoid::{validate_groupoid, validate_morphism, ArrowId, FiniteGroupoid, GroupoidMorphism};
use crate::iso::{check_double_morphism, identity_edges};
use crate::kernel::core;
use crate::report::{anchors, Check, Report};
use crate::words::{box_word, FreeProduct, Letter, Path, ReducedWord, Tag};

/// Groupoid maps `i: H → D` and `j: V → D`, identity on objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub d: FiniteGroupoid,
    pub h: FiniteGroupoid,
    pub v: FiniteGroupoid,
    pub i: GroupoidMorphism,
    pub j: GroupoidMorphism,
}

impl Diagram {
    pub fn validate(&self) -> Report {
        let a = anchors::DIAGONAL;
        let mut report = Report::new("diagram");
        let mut shape = Check::new("shared base", a);
        shape.case(
            self.d.objects() == self.h.objects() && self.d.objects() == self.v.objects(),
            || format!("objects: D {}, H {}, V {}", self.d.objects(), self.h.objects(), self.v.objects()),
        );
        report.push(shape);
        if !report.passed() {
            return report;
        }
        report.absorb("D: ", validate_groupoid(&self.d));
        report.absorb("H: ", validate_groupoid(&self.h));
        report.absorb("V: ", validate_groupoid(&self.v));
        report.absorb("i: ", validate_morphism(&self.h, &self.d, &self.i));
        report.absorb("j: ", validate_morphism(&self.v, &self.d, &self.j));
        report
    }

    /// `j(g) i(x)`.
    pub fn ji(&self, g: ArrowId, x: ArrowId) -> Option<ArrowId> {
        self.d.try_compose(self.j.apply(g), self.i.apply(x))
    }

    /// Every arrow of `D` as `j(g) i(x)` for composable `(g, x)`.
    pub fn check_factorization(&self) -> Report {
        let mut report = Report::new("factorization");
        let mut check = Check::new("every arrow is j(g) i(x)", anchors::DIAGONAL);
        let mut hit = vec![false; self.d.arrow_count()];
        for g in self.v.arrows() {
            for &x in self.h.arrows_from(self.v.tgt(g)) {
                if let Some(z) = self.ji(g, x) {
                    hit[z.0] = true;
                }
            }
        }
        for (z, h) in hit.iter().enumerate() {
            check.case(*h, || format!("a{z} is not a product j(g) i(x)"));
        }
        report.push(check);
        report
    }
}

/// A diagram known to be a factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationDiagram {
    diagram: Diagram,
}

impl FactorizationDiagram {
    pub fn verify(diagram: Diagram) -> Result<Self> {
        let mut report = diagram.validate();
        if !report.passed() {
            return Err(Error::Invalid(Box::new(report)));
        }
        report = diagram.check_factorization();
        if !report.passed() {
            return Err(Error::NotFactorization(report.to_string()));
        }
        Ok(FactorizationDiagram { diagram })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn into_diagram(self) -> Diagram {
        self.diagram
    }
}

/// Boxes `(x; f, g; y)` with `i(x) j(g) = j(f) i(y)`.
pub fn square_of_diagram(dg: &Diagram) -> Result<DoubleGroupoid> {
    let (h, v) = (&dg.h, &dg.v);
    let mut frames = Vec::new();
    for x in h.arrows() {
        for &f in v.arrows_from(h.src(x)) {
            for &g in v.arrows_from(h.tgt(x)) {
                for y in h.hom(v.tgt(f), v.tgt(g)) {
                    let lhs = dg.d.try_compose(dg.i.apply(x), dg.j.apply(g));
                    if lhs.is_some() && lhs == dg.ji(f, y) {
                        frames.push(BoxFrame::new(x, f, g, y));
                    }
                }
            }
        }
    }
    DoubleGroupoid::from_frames(v, h, frames)
}

/// The core of a square against `{(g, x) : j(g) i(x) = 1}` via
/// `E ↦ (l(E), b(E))`.
pub fn core_of_square_check(dg: &Diagram) -> Result<Report> {
    let a = anchors::SQUARE_CORE;
    let sq = square_of_diagram(dg)?;
    let c = core(&sq)?;
    let mut report = Report::new("core of a square");
    let mut pairs = HashSet::new();
    for g in dg.v.arrows() {
        for &x in dg.h.arrows_from(dg.v.tgt(g)) {
            if dg.ji(g, x).is_some_and(|z| dg.d.is_identity(z)) {
                pairs.insert((g, x));
            }
        }
    }
    let mut bij = Check::new("core boxes correspond to trivial pairs", a);
    let image: Vec<(ArrowId, ArrowId)> = c.boxes.iter().map(|&e| (sq.l(e), sq.b(e))).collect();
    let distinct: HashSet<_> = image.iter().copied().collect();
    bij.case(distinct.len() == image.len(), || "two core boxes share a left and bottom side".into());
    bij.case(distinct == pairs, || format!("{} core boxes, {} trivial pairs", distinct.len(), pairs.len()));
    let mut prod = Check::new("core product is (l(M) l(E), b(E) b(M))", a);
    for (e, m, em) in c.groupoid.compose_entries() {
        let (eb, mb, emb) = (c.box_of(e), c.box_of(m), c.box_of(em));
        let l = dg.v.try_compose(sq.l(mb), sq.l(eb));
        let b = dg.h.try_compose(sq.b(eb), sq.b(mb));
        prod.case(l == Some(sq.l(emb)) && b == Some(sq.b(emb)), || format!("{eb} ∘ {mb} = {emb}"));
    }
    report.push(bij);
    report.push(prod);
    Ok(report)
}

/// The diagonal groupoid in the pair model.
#[derive(Clone, Debug)]
pub struct PairModel {
    pub diagram: Diagram,
    /// Composable pairs `(g, x)`, in order of `g` then `x`.
    pub pairs: Vec<(ArrowId, ArrowId)>,
    /// The class (arrow of the diagonal groupoid) of each pair.
    pub class: Vec<ArrowId>,
    index: HashMap<(ArrowId, ArrowId), usize>,
    /// Well-definedness and defining-relation checks.
    pub report: Report,
}

impl PairModel {
    pub fn class_of(&self, g: ArrowId, x: ArrowId) -> Option<ArrowId> {
        self.index.get(&(g, x)).map(|&i| self.class[i])
    }

    /// Representatives of arrow `z`.
    pub fn representatives(&self, z: ArrowId) -> Vec<(ArrowId, ArrowId)> {
        self.pairs
            .iter()
            .zip(&self.class)
            .filter(|&(_, &c)| c == z)
            .map(|(&p, _)| p)
            .collect()
    }

    /// The value of a word in the diagonal groupoid.
    pub fn evaluate(&self, w: &ReducedWord) -> ArrowId {
        let dg = &self.diagram;
        let mut acc = dg.d.identity(w.start());
        for &l in w.letters() {
            let z = match l.tag {
                Tag::H => dg.i.apply(l.arrow),
                Tag::V => dg.j.apply(l.arrow),
            };
            acc = dg.d.try_compose(acc, z).expect("chained word");
        }
        acc
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Builds the pair model and checks it; see [`diagonal`] for the checked
/// entry point.
pub fn pair_model(b: &DoubleGroupoid) -> Result<PairModel> {
    if !b.is_slim() {
        return Err(Error::NotSlim(format!("{} boxes but {} frames", b.len(), b.frames().count())));
    }
    if !has_filling(b) {
        return Err(Error::NoFilling("some top and right sides bound no box".into()));
    }
    let (h, v) = (b.h(), b.v());
    let c = core(b)?;
    let mut pairs = Vec::new();
    for g in v.arrows() {
        for &x in h.arrows_from(v.tgt(g)) {
            pairs.push((g, x));
        }
    }
    let index: HashMap<(ArrowId, ArrowId), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    for (i, &(g, x)) in pairs.iter().enumerate() {
        for &e in c.groupoid.arrows_from(v.tgt(g)) {
            let eb = c.box_of(e);
            // (g, x) ~ (g l(E)⁻¹, b(E)⁻¹ x) for core E with bl(E) = tgt(g)
            let g2 = v.compose(g, v.inverse(b.l(eb)))?;
            let x2 = h.compose(h.inverse(b.b(eb)), x)?;
            let j2 = index[&(g2, x2)];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j2));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    // classes numbered by least representative
    let mut class = vec![ArrowId(0); pairs.len()];
    let mut numbering: HashMap<usize, ArrowId> = HashMap::new();
    let mut arrows = Vec::new();
    for i in 0..pairs.len() {
        let root = find(&mut parent, i);
        let next = ArrowId(numbering.len());
        let z = *numbering.entry(root).or_insert_with(|| {
            let (g, x) = pairs[i];
            arrows.push((v.src(g), h.tgt(x)));
            next
        });
        class[i] = z;
    }
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); arrows.len()];
    for (i, z) in class.iter().enumerate() {
        reps[z.0].push(i);
    }

    let a = anchors::DIAGONAL;
    let mut report = Report::new("diagonal groupoid");
    let mut well = Check::new("product independent of representatives and filling boxes", a);
    let mut table: HashMap<(ArrowId, ArrowId), ArrowId> = HashMap::new();
    for z1 in 0..arrows.len() {
        for z2 in 0..arrows.len() {
            if arrows[z1].1 != arrows[z2].0 {
                continue;
            }
            let mut seen: Option<ArrowId> = None;
            for &p1 in &reps[z1] {
                for &p2 in &reps[z2] {
                    let ((g1, x1), (g2, x2)) = (pairs[p1], pairs[p2]);
                    for fill in b.ur_set(x1, g2)? {
                        let g = v.compose(g1, b.l(fill))?;
                        let x = h.compose(b.b(fill), x2)?;
                        let z = class[index[&(g, x)]];
                        match seen {
                            None => {
                                seen = Some(z);
                                well.case(true, String::new);
                            }
                            Some(s) => {
                                well.case(s == z, || {
                                    format!("a{z1} · a{z2}: via ({g1}, {x1}), ({g2}, {x2}) and {fill} gives {z}, earlier {s}")
                                });
                            }
                        }
                    }
                }
            }
            table.insert((ArrowId(z1), ArrowId(z2)), seen.expect("filling provides a box"));
        }
    }
    let d = FiniteGroupoid::generate(b.base(), arrows, |z1, z2| table[&(z1, z2)]);
    let d = match d {
        Ok(d) => d,
        Err(e) => {
            report.push(well);
            return Err(Error::Inconsistent(format!("pair model is not a groupoid: {e}\n{report}")));
        }
    };
    let i_map = GroupoidMorphism::new(h.arrows().map(|x| class[index[&(v.identity(h.src(x)), x)]]).collect());
    let j_map = GroupoidMorphism::new(v.arrows().map(|g| class[index[&(g, h.identity(v.tgt(g)))]]).collect());
    let diagram = Diagram {
        d,
        h: h.clone(),
        v: v.clone(),
        i: i_map,
        j: j_map,
    };
    report.push(well);
    report.absorb("", diagram.validate());

    let mut fact = Check::new("each pair is the product of its images", a);
    for (k, &(g, x)) in pairs.iter().enumerate() {
        fact.case(diagram.ji(g, x) == Some(class[k]), || format!("j({g}) i({x}) is not the class of ({g}, {x})"));
    }
    let mut rel = Check::new("box relations hold", a);
    for bx in b.boxes() {
        let lhs = diagram.d.try_compose(diagram.i.apply(b.t(bx)), diagram.j.apply(b.r(bx)));
        let rhs = diagram.ji(b.l(bx), b.b(bx));
        rel.case(lhs.is_some() && lhs == rhs, || format!("{bx}: i(t) j(r) = {lhs:?}, j(l) i(b) = {rhs:?}"));
    }
    report.push(fact);
    report.push(rel);
    Ok(PairModel {
        diagram,
        pairs,
        class,
        index,
        report,
    })
}

/// The diagonal groupoid with its factorization maps; fails unless every
/// consistency check of the pair model passes.
pub fn diagonal(b: &DoubleGroupoid) -> Result<FactorizationDiagram> {
    let pm = pair_model(b)?;
    if !pm.report.passed() {
        return Err(Error::Invalid(Box::new(pm.report)));
    }
    FactorizationDiagram::verify(pm.diagram)
}

/// `square(diagonal(B)) ≅ B` through the box map that keeps frames.
pub fn roundtrip_slim(b: &DoubleGroupoid) -> Result<Report> {
    let dg = diagonal(b)?;
    let sq = square_of_diagram(dg.diagram())?;
    let mut report = Report::new("slim round trip");
    let mut map = Check::new("every box reappears in the square", anchors::SLIM_EQUIVALENCE);
    let index: HashMap<BoxFrame, BoxId> = sq.boxes().map(|x| (sq.pi(x), x)).collect();
    let mut boxes = Vec::with_capacity(b.len());
    for x in b.boxes() {
        let y = index.get(&b.pi(x)).copied();
        map.case(y.is_some(), || format!("{x} with sides {} is missing from the square", b.pi(x)));
        boxes.push(y.unwrap_or(BoxId(0)));
    }
    let ok = map.passed();
    report.push(map);
    if ok {
        report.absorb("", check_double_morphism(b, &sq, &identity_edges(b, boxes)));
    }
    Ok(report)
}

/// `diagonal(square(d)) ≅ d` through `f(j'(g) i'(x)) = j(g) i(x)`.
pub fn roundtrip_diagram(fd: &FactorizationDiagram) -> Result<Report> {
    let a = anchors::SLIM_EQUIVALENCE;
    let dg = fd.diagram();
    let sq = square_of_diagram(dg)?;
    let pm = pair_model(&sq)?;
    let mut report = Report::new("diagram round trip");
    report.absorb("pair model: ", pm.report.clone());
    let back = &pm.diagram;
    let mut well = Check::new("comparison map well defined", a);
    let mut f: Vec<Option<ArrowId>> = vec![None; back.d.arrow_count()];
    for (k, &(g, x)) in pm.pairs.iter().enumerate() {
        let z = dg.ji(g, x);
        let slot = &mut f[pm.class[k].0];
        match (*slot, z) {
            (_, None) => well.fail(|| format!("({g}, {x}) not composable in D")),
            (None, Some(z)) => {
                *slot = Some(z);
                well.case(true, String::new);
            }
            (Some(s), Some(z)) => {
                well.case(s == z, || format!("class {} maps to {s} and {z}", pm.class[k]));
            }
        }
    }
    let ok = well.passed();
    report.push(well);
    if !ok {
        return Ok(report);
    }
    let f = GroupoidMorphism::new(f.into_iter().map(Option::unwrap).collect());
    report.absorb("comparison: ", validate_morphism(&back.d, &dg.d, &f));
    let mut iso = Check::new("comparison map bijective and compatible with i, j", a);
    iso.case(f.is_injective() && back.d.arrow_count() == dg.d.arrow_count(), || {
        format!("{} arrows map to {}", back.d.arrow_count(), dg.d.arrow_count())
    });
    for x in dg.h.arrows() {
        iso.case(f.apply(back.i.apply(x)) == dg.i.apply(x), || format!("f i'({x}) != i({x})"));
    }
    for g in dg.v.arrows() {
        iso.case(f.apply(back.j.apply(g)) == dg.j.apply(g), || format!("f j'({g}) != j({g})"));
    }
    report.push(iso);
    Ok(report)
}

/// Fusion: connected vertical groupoid and bottom sides injective on the
/// core. The report cross-checks the consequences.
pub fn is_fusion(b: &DoubleGroupoid) -> Result<(bool, Report)> {
    if !has_filling(b) {
        return Err(Error::NoFilling("fusion is defined under filling".into()));
    }
    let a = anchors::FUSION;
    let c = core(b)?;
    let f1 = b.v().is_connected();
    let bottoms: HashSet<ArrowId> = c.boxes.iter().map(|&e| b.b(e)).collect();
    let f2 = bottoms.len() == c.boxes.len();
    let fusion = f1 && f2;
    let mut report = Report::new("fusion");
    let mut slim = Check::new("fusion implies slim", a);
    slim.case(!fusion || b.is_slim(), || "fusion but not slim".into());
    report.push(slim);
    if b.is_slim() {
        let pm = pair_model(b)?;
        let j_inj = pm.diagram.j.is_injective();
        let mut equiv = Check::new("fusion iff V connected and j injective", a);
        equiv.case(fusion == (f1 && j_inj), || {
            format!("fusion = {fusion}, V connected = {f1}, j injective = {j_inj}")
        });
        report.push(equiv);
        let mut conn = Check::new("fusion implies a connected diagonal groupoid", a);
        conn.case(!fusion || pm.diagram.d.is_connected(), || "diagonal groupoid is disconnected".into());
        report.push(conn);
    }
    Ok((fusion, report))
}

/// Vacant iff `i`, `j` are injective and every arrow has a unique
/// decomposition `j(g) i(x)`.
pub fn vacancy_bridge(b: &DoubleGroupoid) -> Result<Report> {
    let pm = pair_model(b)?;
    let vacant = crate::double::is_vacant(b);
    let injective = pm.diagram.i.is_injective() && pm.diagram.j.is_injective();
    let unique = pm.diagram.d.arrows().all(|z| pm.representatives(z).len() == 1);
    let mut report = Report::new("vacancy");
    let mut check = Check::new("vacant iff unique decompositions with injective maps", anchors::DIAGONAL);
    check.case(vacant == (injective && unique), || {
        format!("vacant = {vacant}, injective = {injective}, unique = {unique}")
    });
    report.push(check);
    Ok(report)
}

/// Cap on the number of words the closure oracle will visit.
pub const ORACLE_NODE_CAP: usize = 2_000_000;

/// Bounded search for `w` among products of at most `max_len` generators of
/// the normal closure of the box relations: `[A]^{±1}` and their conjugates
/// by a single letter. `Ok(false)` means not found within the bound.
pub fn j_closure_oracle(b: &DoubleGroupoid, w: &ReducedWord, max_len: usize) -> Result<bool> {
    let fp = FreeProduct::of(b);
    let p = w.start();
    if fp.end(w) != p {
        return Ok(false);
    }
    if w.is_base() {
        return Ok(true);
    }
    let mut relators: HashSet<ReducedWord> = HashSet::new();
    for a in b.boxes() {
        let r = box_word(b, a);
        if !r.is_base() {
            relators.insert(fp.inverse(&r));
            relators.insert(r);
        }
    }
    let mut gens: HashSet<ReducedWord> = HashSet::new();
    for r in &relators {
        if r.start() == p {
            gens.insert(r.clone());
        }
        // c r c⁻¹ with c a single letter from p to the base point of r
        for tag in [Tag::H, Tag::V] {
            let g = if tag == Tag::H { b.h() } else { b.v() };
            for c in g.hom(p, r.start()) {
                let l = Letter { tag, arrow: c };
                if fp.is_identity(l) {
                    continue;
                }
                let cw = fp.reduce(&Path {
                    start: p,
                    letters: vec![l],
                })?;
                let conj = fp.concat(&fp.concat(&cw, r)?, &fp.inverse(&cw))?;
                if !conj.is_base() {
                    gens.insert(conj);
                }
            }
        }
    }
    let mut gens: Vec<ReducedWord> = gens.into_iter().collect();
    gens.sort();
    let mut visited: HashSet<ReducedWord> = HashSet::new();
    let start = ReducedWord::base(p);
    visited.insert(start.clone());
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((u, depth)) = queue.pop_front() {
        if &u == w {
            return Ok(true);
        }
        if depth == max_len {
            continue;
        }
        for gw in &gens {
            let next = fp.concat(&u, gw)?;
            if &next == w {
                return Ok(true);
            }
            if visited.insert(next.clone()) {
                if visited.len() > ORACLE_NODE_CAP {
                    return Err(Error::BoundExceeded(format!(
                        "visited more than {ORACLE_NODE_CAP} words at depth {depth}"
                    )));
                }
                queue.push_back((next, depth + 1));
            }
        }
    }
    Ok(false)
}
