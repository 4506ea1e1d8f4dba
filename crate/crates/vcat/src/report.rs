use std::fmt;

const KEPT_VIOLATIONS: usize = 32;

/// Outcome of checking one law over a family of instances.
#[derive(Debug, Clone, PartialEq)]
pub struct LawEntry {
    pub law: String,
    pub checked: usize,
    pub failures: usize,
    /// The first few failing instances, rendered for humans.
    pub violations: Vec<String>,
}

impl LawEntry {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LawReport {
    pub entries: Vec<LawEntry>,
}

impl LawReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(LawEntry::passed)
    }

    pub fn entry(&self, law: &str) -> Option<&LawEntry> {
        self.entries.iter().find(|e| e.law == law)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }

    /// Starts a new law; subsequent [`record`](Self::record) calls attach to it.
    pub fn begin(&mut self, law: impl Into<String>) {
        self.entries.push(LawEntry {
            law: law.into(),
            checked: 0,
            failures: 0,
            violations: Vec::new(),
        });
    }

    /// Records one instance of the current law. The closure renders the
    /// instance and is only called on failure.
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        let entry = self
            .entries
            .last_mut()
            .expect("record called before begin");
        entry.checked += 1;
        if !ok {
            entry.failures += 1;
            if entry.violations.len() < KEPT_VIOLATIONS {
                entry.violations.push(describe());
            }
        }
    }

    pub fn merge(&mut self, other: LawReport) {
        self.entries.extend(other.entries);
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let status = if e.passed() { "pass" } else { "FAIL" };
            writeln!(f, "{status}  {} ({} checked)", e.law, e.checked)?;
            for v in &e.violations {
                writeln!(f, "      {v}")?;
            }
            if e.failures > e.violations.len() {
                writeln!(f, "      ... {} more", e.failures - e.violations.len())?;
            }
        }
        if self.all_pass() {
            write!(f, "all laws pass")
        } else {
            write!(f, "{} law(s) failed", self.failures().count())
        }
    }
}
