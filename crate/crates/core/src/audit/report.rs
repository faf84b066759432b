use std::fmt;

/// One failing (or flagged) axiom instance. `state` is the model file text
/// of the state under test, so the instance can be replayed from it alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub state: String,
    pub inputs: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomResult {
    pub name: String,
    /// Instances whose premises held and whose conclusion was evaluated.
    pub instances: u64,
    /// Instances skipped because a premise did not hold.
    pub vacuous: u64,
    pub failures: Vec<Failure>,
    /// Violations of a property only required in a restricted regime (e.g.
    /// consistency preservation outside universal states). Reported, never
    /// counted as failures.
    pub flagged: Vec<Failure>,
    pub conditional: bool,
}

impl AxiomResult {
    fn new(name: &str, conditional: bool) -> Self {
        AxiomResult {
            name: name.to_owned(),
            instances: 0,
            vacuous: 0,
            failures: Vec::new(),
            flagged: Vec::new(),
            conditional,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(&mut self, other: AxiomResult) {
        self.instances += other.instances;
        self.vacuous += other.vacuous;
        self.failures.extend(other.failures);
        self.flagged.extend(other.flagged);
        self.conditional |= other.conditional;
    }
}

/// Per-axiom results, in the order axioms were first recorded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub results: Vec<AxiomResult>,
}

impl AuditReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub(crate) fn entry(&mut self, name: &str) -> &mut AxiomResult {
        self.entry_with(name, false)
    }

    pub(crate) fn entry_with(&mut self, name: &str, conditional: bool) -> &mut AxiomResult {
        let pos = match self.results.iter().position(|r| r.name == name) {
            Some(p) => p,
            None => {
                self.results.push(AxiomResult::new(name, conditional));
                self.results.len() - 1
            }
        };
        &mut self.results[pos]
    }

    /// Records one instance: `premise` false counts as vacuous; otherwise
    /// `holds` decides pass or fail, with `failure` built lazily.
    pub(crate) fn record<F>(&mut self, name: &str, premise: bool, holds: bool, failure: F)
    where
        F: FnOnce() -> Failure,
    {
        let e = self.entry(name);
        if !premise {
            e.vacuous += 1;
            return;
        }
        e.instances += 1;
        if !holds {
            e.failures.push(failure());
        }
    }

    /// As [`record`](Self::record), but a violation is flagged rather than
    /// failed when `required` is false.
    pub(crate) fn record_conditional<F>(
        &mut self,
        name: &str,
        required: bool,
        premise: bool,
        holds: bool,
        failure: F,
    ) where
        F: FnOnce() -> Failure,
    {
        let e = self.entry_with(name, !required);
        if !premise {
            e.vacuous += 1;
            return;
        }
        e.instances += 1;
        if !holds {
            if required {
                e.failures.push(failure());
            } else {
                e.flagged.push(failure());
            }
        }
    }

    /// Sums per-axiom counts and concatenates failures. Associative; the
    /// result does not depend on merge order up to the order of entries.
    pub fn merge(&mut self, other: AuditReport) {
        for r in other.results {
            match self.results.iter_mut().find(|e| e.name == r.name) {
                Some(e) => e.merge(r),
                None => self.results.push(r),
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(AxiomResult::passed)
    }

    pub fn failure_count(&self) -> usize {
        self.results.iter().map(|r| r.failures.len()).sum()
    }

    /// Tab-separated lines: one summary line per axiom, then one line per
    /// failing or flagged instance. Newlines inside state text are escaped.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!(
                "axiom={}\tstatus={}\tinstances={}\tvacuous={}\tfailures={}\tflagged={}\n",
                r.name,
                if r.passed() { "pass" } else { "fail" },
                r.instances,
                r.vacuous,
                r.failures.len(),
                r.flagged.len()
            ));
            let tagged = r
                .failures
                .iter()
                .map(|f| ("failure", f))
                .chain(r.flagged.iter().map(|f| ("flagged", f)));
            for (kind, f) in tagged {
                out.push_str(&format!(
                    "{kind}\taxiom={}\tinputs={}\texpected={}\tactual={}\tstate={}\n",
                    r.name,
                    f.inputs,
                    f.expected,
                    f.actual,
                    f.state.replace('\n', "\\n")
                ));
            }
        }
        out
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = if !r.passed() {
                "FAIL"
            } else if !r.flagged.is_empty() {
                "PASS (flagged)"
            } else {
                "PASS"
            };
            write!(
                f,
                "{:<40} {:<14} {} instances, {} vacuous",
                r.name, status, r.instances, r.vacuous
            )?;
            if !r.failures.is_empty() {
                write!(f, ", {} failures", r.failures.len())?;
            }
            if !r.flagged.is_empty() {
                write!(f, ", {} flagged", r.flagged.len())?;
            }
            writeln!(f)?;
            for (kind, x) in r
                .failures
                .iter()
                .map(|x| ("counterexample", x))
                .chain(r.flagged.iter().map(|x| ("flagged", x)))
                .take(3)
            {
                writeln!(f, "  {kind}: {}", x.inputs)?;
                writeln!(f, "    expected {}, got {}", x.expected, x.actual)?;
                for line in x.state.lines() {
                    writeln!(f, "    | {line}")?;
                }
            }
        }
        let total: u64 = self.results.iter().map(|r| r.instances).sum();
        write!(
            f,
            "{}: {} axioms, {} instances, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.results.len(),
            total,
            self.failure_count()
        )
    }
}
