//! Law-by-law verdicts with witnesses.
//!
//! Every checking operation in the crate produces a [`Report`]: one [`Check`]
//! per law, the number of cases examined, and the first few counterexamples.
//! Reports are deterministic for a given input, so they can be diffed.

use std::fmt;

use serde::Serialize;

/// Names of the results each check family verifies.
pub mod anchors {
    pub const GROUPOID_AXIOMS: &str = "groupoid axioms";
    pub const BUNDLE_AXIOMS: &str = "abelian group bundle axioms";
    pub const ACTION_AXIOMS: &str = "groupoid action axioms";
    pub const ORBIT_COUNTING: &str = "orbit counting formula";
    pub const DOUBLE_AXIOMS: &str = "double groupoid axioms";
    pub const INTERCHANGE: &str = "interchange law";
    pub const FRAME: &str = "frame of a double groupoid";
    pub const CORE_ACTION: &str = "core action orbits are Ur-sets";
    pub const KERNEL_BUNDLE: &str = "kernel is an abelian group bundle";
    pub const EDGE_ACTIONS: &str = "edge conjugation actions";
    pub const CORE_SEQUENCE: &str = "kernel-core-frame exact sequence";
    pub const CORNER_FORMULA: &str = "corner function formula";
    pub const FRAME_KERNEL_BIJECTION: &str = "kernel x frame bijection";
    pub const COCYCLE_EQUATIONS: &str = "abelian extension cocycle equations";
    pub const EXTENSION_THEOREM: &str = "double groupoid is an abelian extension";
    pub const FREE_PRODUCT: &str = "free product normal form";
    pub const LENGTH_ADDITIVITY: &str = "reduced length additivity";
    pub const DIAGONAL: &str = "diagonal groupoid factorization";
    pub const SQUARE_CORE: &str = "core of a square construction";
    pub const SLIM_EQUIVALENCE: &str = "slim double groupoids are factorizations";
    pub const FUSION: &str = "fusion criterion";
    pub const ISOMORPHISM: &str = "isomorphism witness";
}

/// How many witnesses a single check keeps.
pub const MAX_WITNESSES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub law: String,
    pub anchor: String,
    pub cases: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(law: impl Into<String>, anchor: &str) -> Self {
        Check {
            law: law.into(),
            anchor: anchor.to_string(),
            cases: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records one case; the witness closure only runs on failure.
    pub fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
        ok
    }

    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.case(false, witness);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Appends every check of `other`, prefixing law names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.law = format!("{prefix}{}", c.law);
            self.checks.push(c);
        }
        self.warnings.extend(other.warnings);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, law: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.law == law)
    }

    pub fn into_result(self) -> crate::Result<Report> {
        if self.passed() {
            Ok(self)
        } else {
            Err(crate::Error::Invalid(Box::new(self)))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "  {verdict} {} [{}] ({} cases, {} failed)",
                c.law, c.anchor, c.cases, c.failures
            )?;
            for w in &c.witnesses {
                writeln!(f, "       witness: {w}")?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "  WARN {w}")?;
        }
        Ok(())
    }
}
