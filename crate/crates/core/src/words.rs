//! Reduced words in the free product of the vertical and horizontal edge
//! groupoids, with identities amalgamated.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::double::{BoxId, DoubleGroupoid};
use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid, ObjectId};
use crate::report::{anchors, Check, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    H,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub tag: Tag,
    pub arrow: ArrowId,
}

impl Letter {
    pub fn h(a: ArrowId) -> Self {
        Letter { tag: Tag::H, arrow: a }
    }

    pub fn v(a: ArrowId) -> Self {
        Letter { tag: Tag::V, arrow: a }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.tag {
            Tag::H => "H",
            Tag::V => "V",
        };
        write!(f, "{t}:{}", self.arrow.0)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, idx) = s
            .split_once(':')
            .ok_or_else(|| Error::format(s, "expected TAG:index"))?;
        let arrow = ArrowId(
            idx.parse()
                .map_err(|_| Error::format(s, "arrow index is not a nonnegative integer"))?,
        );
        match tag {
            "H" => Ok(Letter::h(arrow)),
            "V" => Ok(Letter::v(arrow)),
            _ => Err(Error::format(s, "tag must be H or V")),
        }
    }
}

/// Parses a whitespace-separated list of `TAG:index` letters.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    s.split_whitespace().map(str::parse).collect()
}

/// A path in the quiver `H ⊔ V` starting at `start`; empty paths stand for the
/// base point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: ObjectId,
    pub letters: Vec<Letter>,
}

/// A reduced path: no identity letters, alternating tags, chained endpoints.
/// The empty word at `P` is the identity `[P]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord {
    start: ObjectId,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn base(p: ObjectId) -> Self {
        ReducedWord {
            start: p,
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_base(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn start(&self) -> ObjectId {
        self.start
    }

    pub fn as_path(&self) -> Path {
        Path {
            start: self.start,
            letters: self.letters.clone(),
        }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "[{}]", self.start);
        }
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The free product of `v` and `h` over their common base.
#[derive(Clone, Copy, Debug)]
pub struct FreeProduct<'a> {
    pub h: &'a FiniteGroupoid,
    pub v: &'a FiniteGroupoid,
}

impl<'a> FreeProduct<'a> {
    pub fn new(h: &'a FiniteGroupoid, v: &'a FiniteGroupoid) -> Self {
        FreeProduct { h, v }
    }

    pub fn of(d: &'a DoubleGroupoid) -> Self {
        FreeProduct { h: d.h(), v: d.v() }
    }

    fn groupoid(&self, t: Tag) -> &'a FiniteGroupoid {
        match t {
            Tag::H => self.h,
            Tag::V => self.v,
        }
    }

    pub fn src(&self, l: Letter) -> ObjectId {
        self.groupoid(l.tag).src(l.arrow)
    }

    pub fn tgt(&self, l: Letter) -> ObjectId {
        self.groupoid(l.tag).tgt(l.arrow)
    }

    pub fn is_identity(&self, l: Letter) -> bool {
        self.groupoid(l.tag).is_identity(l.arrow)
    }

    pub fn inverse_letter(&self, l: Letter) -> Letter {
        Letter {
            tag: l.tag,
            arrow: self.groupoid(l.tag).inverse(l.arrow),
        }
    }

    fn merge(&self, a: Letter, b: Letter) -> Letter {
        let g = self.groupoid(a.tag);
        Letter {
            tag: a.tag,
            arrow: g.try_compose(a.arrow, b.arrow).expect("chained letters compose"),
        }
    }

    /// Validates a path's letters and chaining; returns its endpoint.
    pub fn check_chained(&self, p: &Path) -> Result<ObjectId> {
        let mut at = p.start;
        if at.0 >= self.h.objects() {
            return Err(Error::NotChained(format!("start {at} is not an object")));
        }
        for (i, &l) in p.letters.iter().enumerate() {
            if l.arrow.0 >= self.groupoid(l.tag).arrow_count() {
                return Err(Error::NotChained(format!("letter {i} ({l}) is not an arrow")));
            }
            if self.src(l) != at {
                return Err(Error::NotChained(format!(
                    "letter {i} ({l}) starts at {} but the path is at {at}",
                    self.src(l)
                )));
            }
            at = self.tgt(l);
        }
        Ok(at)
    }

    pub fn end(&self, w: &ReducedWord) -> ObjectId {
        w.letters.last().map_or(w.start, |&l| self.tgt(l))
    }

    /// Leftmost-innermost reduction with a stack.
    pub fn reduce(&self, p: &Path) -> Result<ReducedWord> {
        self.check_chained(p)?;
        let mut stack: Vec<Letter> = Vec::with_capacity(p.letters.len());
        for &l in &p.letters {
            if self.is_identity(l) {
                continue;
            }
            match stack.last() {
                Some(&top) if top.tag == l.tag => {
                    stack.pop();
                    let m = self.merge(top, l);
                    if !self.is_identity(m) {
                        stack.push(m);
                    }
                }
                _ => stack.push(l),
            }
        }
        Ok(ReducedWord {
            start: p.start,
            letters: stack,
        })
    }

    /// Applies the reduction rules one at a time in a random order.
    pub fn reduce_with_schedule(&self, p: &Path, rng: &mut impl Rng) -> Result<ReducedWord> {
        self.check_chained(p)?;
        let mut w = p.letters.clone();
        loop {
            let mut redexes = Vec::new();
            for i in 0..w.len() {
                // dropping the only identity letter leaves the base point
                if self.is_identity(w[i]) {
                    redexes.push((0u8, i));
                }
                if i + 1 < w.len() && w[i].tag == w[i + 1].tag {
                    redexes.push((1u8, i));
                }
            }
            if redexes.is_empty() {
                break;
            }
            let (rule, i) = redexes[rng.gen_range(0..redexes.len())];
            if rule == 0 {
                w.remove(i);
            } else {
                let m = self.merge(w[i], w[i + 1]);
                w.splice(i..i + 2, [m]);
            }
        }
        Ok(ReducedWord {
            start: p.start,
            letters: w,
        })
    }

    /// Whether `w` satisfies the reduced-word invariants.
    pub fn is_reduced(&self, w: &ReducedWord) -> bool {
        self.check_chained(&w.as_path()).is_ok()
            && w.letters.iter().all(|&l| !self.is_identity(l))
            && w.letters.windows(2).all(|p| p[0].tag != p[1].tag)
    }

    pub fn concat(&self, a: &ReducedWord, b: &ReducedWord) -> Result<ReducedWord> {
        let end = self.end(a);
        if end != b.start {
            return Err(Error::NotChained(format!("{a} ends at {end} but {b} starts at {}", b.start)));
        }
        let mut letters = a.letters.clone();
        letters.extend_from_slice(&b.letters);
        self.reduce(&Path {
            start: a.start,
            letters,
        })
    }

    pub fn inverse(&self, w: &ReducedWord) -> ReducedWord {
        ReducedWord {
            start: self.end(w),
            letters: w.letters.iter().rev().map(|&l| self.inverse_letter(l)).collect(),
        }
    }

    /// A random chained path of `len` letters from `start`, identities included.
    pub fn random_path(&self, start: ObjectId, len: usize, rng: &mut impl Rng) -> Path {
        let mut at = start;
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let tag = if rng.gen_bool(0.5) { Tag::H } else { Tag::V };
            let out = self.groupoid(tag).arrows_from(at);
            let l = Letter {
                tag,
                arrow: out[rng.gen_range(0..out.len())],
            };
            at = self.tgt(l);
            letters.push(l);
        }
        Path { start, letters }
    }

    /// All reduced words of exactly `len` letters.
    pub fn reduced_words_of_length(&self, len: usize) -> Vec<ReducedWord> {
        let mut out = Vec::new();
        for p in self.h.object_ids() {
            if len == 0 {
                out.push(ReducedWord::base(p));
                continue;
            }
            for tag in [Tag::H, Tag::V] {
                let mut partial = vec![(vec![], p, tag)];
                for _ in 0..len {
                    let mut next = Vec::new();
                    for (ls, at, t) in partial {
                        for &a in self.groupoid(t).arrows_from(at) {
                            let l = Letter { tag: t, arrow: a };
                            if self.is_identity(l) {
                                continue;
                            }
                            let mut ls2: Vec<Letter> = ls.clone();
                            ls2.push(l);
                            let other = if t == Tag::H { Tag::V } else { Tag::H };
                            next.push((ls2, self.tgt(l), other));
                        }
                    }
                    partial = next;
                }
                out.extend(partial.into_iter().map(|(letters, _, _)| ReducedWord { start: p, letters }));
            }
        }
        out
    }
}

/// How the last letter of `p` meets the first letter of `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Different groupoids.
    Alternating,
    /// Same groupoid, not mutually inverse.
    Merging,
    /// Mutually inverse, and the next pair in is not.
    Cancelling,
}

impl Boundary {
    /// Length of `p q` for lengths `n` and `m` as given by the length rule.
    pub fn stated_length(self, n: usize, m: usize) -> usize {
        match self {
            Boundary::Alternating => n + m,
            Boundary::Merging => n + m - 1,
            Boundary::Cancelling => n + m - 2,
        }
    }

    /// Length of `p q` as the rewriting actually produces it: after a
    /// cancellation the two letters that become adjacent share a groupoid
    /// and merge, unless one side has run out.
    pub fn actual_length(self, n: usize, m: usize) -> usize {
        match self {
            Boundary::Cancelling if n >= 2 && m >= 2 => n + m - 3,
            b => b.stated_length(n, m),
        }
    }
}

impl FreeProduct<'_> {
    /// The boundary configuration of `p q`, or `None` if either word is
    /// empty, they do not chain, or the cancellation goes two letters deep.
    pub fn boundary(&self, p: &ReducedWord, q: &ReducedWord) -> Option<Boundary> {
        let (&last, &first) = (p.letters.last()?, q.letters.first()?);
        if self.end(p) != q.start {
            return None;
        }
        if last.tag != first.tag {
            return Some(Boundary::Alternating);
        }
        if self.inverse_letter(last) != first {
            return Some(Boundary::Merging);
        }
        let n = p.letters.len();
        match (n.checked_sub(2).map(|i| p.letters[i]), q.letters.get(1)) {
            (Some(a), Some(&b)) if self.inverse_letter(a) == b => None,
            _ => Some(Boundary::Cancelling),
        }
    }
}

/// Checks the length rule on every chained pair drawn from `words`.
pub fn check_length_additivity(fp: &FreeProduct, words: &[ReducedWord]) -> Result<Report> {
    let a = anchors::LENGTH_ADDITIVITY;
    let mut report = Report::new("length additivity");
    let mut checks = [
        Check::new("different groupoids at the boundary: N + M", a),
        Check::new("same groupoid, not inverse: N + M - 1", a),
        Check::new("inverse boundary letters, next pair not inverse: N + M - 2", a),
    ];
    for p in words {
        for q in words {
            let Some(b) = fp.boundary(p, q) else { continue };
            let (n, m) = (p.len(), q.len());
            let got = fp.concat(p, q)?.len();
            let want = b.stated_length(n, m);
            let slot = match b {
                Boundary::Alternating => 0,
                Boundary::Merging => 1,
                Boundary::Cancelling => 2,
            };
            checks[slot].case(got == want, || format!("{p} · {q}: length {got}, rule gives {want} (N = {n}, M = {m})"));
        }
    }
    for c in checks {
        report.push(c);
    }
    Ok(report)
}

/// `[A] = t(A) r(A) b(A)⁻¹ l(A)⁻¹`, a loop at the top-left corner.
pub fn box_word(d: &DoubleGroupoid, a: BoxId) -> ReducedWord {
    let fp = FreeProduct::of(d);
    let path = Path {
        start: d.tl(a),
        letters: vec![
            Letter::h(d.t(a)),
            Letter::v(d.r(a)),
            Letter::h(d.h().inverse(d.b(a))),
            Letter::v(d.v().inverse(d.l(a))),
        ],
    };
    fp.reduce(&path).expect("box sides are chained")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::coarse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair2() -> FiniteGroupoid {
        FiniteGroupoid::pair(2)
    }

    #[test]
    fn boundary_lengths_match_rewriting() {
        // the cancelling case as the rewriting computes it
        for g in [pair2(), FiniteGroupoid::cyclic(3)] {
            let fp = FreeProduct::new(&g, &g);
            let words: Vec<ReducedWord> = (1..=3).flat_map(|n| fp.reduced_words_of_length(n)).collect();
            for p in &words {
                for q in &words {
                    if let Some(b) = fp.boundary(p, q) {
                        assert_eq!(fp.concat(p, q).unwrap().len(), b.actual_length(p.len(), q.len()), "{p} · {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn identity_letter_reduces_to_base() {
        let g = pair2();
        let fp = FreeProduct::new(&g, &g);
        let p = Path {
            start: ObjectId(1),
            letters: vec![Letter::h(g.identity(ObjectId(1)))],
        };
        assert_eq!(fp.reduce(&p).unwrap(), ReducedWord::base(ObjectId(1)));
    }

    #[test]
    fn letter_times_inverse_reduces_to_base() {
        let g = pair2();
        let fp = FreeProduct::new(&g, &g);
        let a = g.hom(ObjectId(0), ObjectId(1))[0];
        let p = Path {
            start: ObjectId(0),
            letters: vec![Letter::v(a), Letter::v(g.inverse(a))],
        };
        assert_eq!(fp.reduce(&p).unwrap(), ReducedWord::base(ObjectId(0)));
    }

    #[test]
    fn cancelling_middle_merges_outer_letters() {
        let g = FiniteGroupoid::cyclic(3);
        let fp = FreeProduct::new(&g, &g);
        let (r, r2) = (ArrowId(1), ArrowId(2));
        // x g g⁻¹ x' with x = x' = r, so x x' = r² is not an identity
        let p = Path {
            start: ObjectId(0),
            letters: vec![Letter::h(r), Letter::v(r), Letter::v(r2), Letter::h(r)],
        };
        let w = fp.reduce(&p).unwrap();
        assert_eq!(w.letters(), &[Letter::h(r2)]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(fp.reduce_with_schedule(&p, &mut rng).unwrap(), w);
        }
    }

    #[test]
    fn unchained_path_is_rejected() {
        let g = pair2();
        let fp = FreeProduct::new(&g, &g);
        let a = g.hom(ObjectId(0), ObjectId(1))[0];
        let p = Path {
            start: ObjectId(0),
            letters: vec![Letter::v(a), Letter::v(a)],
        };
        assert!(matches!(fp.reduce(&p), Err(Error::NotChained(_))));
    }

    #[test]
    fn word_times_inverse_is_base() {
        let g = pair2();
        let fp = FreeProduct::new(&g, &g);
        for w in fp.reduced_words_of_length(3) {
            let e = fp.concat(&w, &fp.inverse(&w)).unwrap();
            assert_eq!(e, ReducedWord::base(w.start()));
        }
    }

    #[test]
    fn box_words() {
        let g = pair2();
        let d = coarse(&g, &g).unwrap();
        assert!(box_word(&d, d.theta(ObjectId(0))).is_base());
        let full = d
            .boxes()
            .find(|&a| {
                !g.is_identity(d.t(a)) && !g.is_identity(d.b(a)) && !g.is_identity(d.l(a)) && !g.is_identity(d.r(a))
            })
            .unwrap();
        let w = box_word(&d, full);
        assert_eq!(w.len(), 4);
        assert!(FreeProduct::of(&d).is_reduced(&w));
    }

    #[test]
    fn parse_round_trip() {
        let ls = parse_letters("V:3 H:1 V:2").unwrap();
        assert_eq!(ls, vec![Letter::v(ArrowId(3)), Letter::h(ArrowId(1)), Letter::v(ArrowId(2))]);
        assert!(parse_letters("X:1").is_err());
        assert!(parse_letters("H:-1").is_err());
    }
}
