use serde::{Deserialize, Serialize};

use super::step::{step_at, RuleTag};
use super::ReductionError;
use crate::term::{bisim_up_to, Coterm, FiniteTerm, Position, Tri};

#[derive(Clone, Debug)]
pub struct Step {
    pub position: Position,
    pub rule: RuleTag,
    /// Always `position.depth()`.
    pub depth: usize,
    /// Membership verdict that licensed a `BotU` step; `None` for β.
    pub verdict: Option<Tri>,
    pub result: Coterm,
}

/// A finite reduction sequence. Terms are shared, not copied.
#[derive(Clone, Debug)]
pub struct Trace {
    pub start: Coterm,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn new(start: Coterm) -> Self {
        Trace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &Coterm {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// Term number `i`: the start for `i = 0`, else the result of step `i - 1`.
    pub fn term(&self, i: usize) -> &Coterm {
        if i == 0 {
            &self.start
        } else {
            &self.steps[i - 1].result
        }
    }

    /// Contracts a redex at the end of the trace and records the step.
    pub fn push(
        &mut self,
        position: Position,
        rule: RuleTag,
        verdict: Option<Tri>,
    ) -> Result<&Step, ReductionError> {
        let result = step_at(self.end(), &position, rule)?;
        self.steps.push(Step {
            depth: position.depth(),
            position,
            rule,
            verdict,
            result,
        });
        Ok(self.steps.last().expect("just pushed"))
    }

    /// True if any ⊥-step relied on an `Unknown` verdict.
    pub fn has_assumed_steps(&self) -> bool {
        self.steps
            .iter()
            .any(|s| s.verdict.as_ref().is_some_and(Tri::is_unknown))
    }

    /// Checks that every recorded result is the contraction of its
    /// predecessor at the recorded position, compared up to `depth`.
    pub fn validate(&self, depth: usize) -> Result<(), ReductionError> {
        let mut prev = &self.start;
        for (i, step) in self.steps.iter().enumerate() {
            let invalid = |why: String| ReductionError::InvalidTrace(format!("step {i}: {why}"));
            if step.depth != step.position.depth() {
                return Err(invalid(format!(
                    "depth {} does not match position {}",
                    step.depth, step.position
                )));
            }
            match (step.rule, &step.verdict) {
                (RuleTag::BotU, None) => return Err(invalid("⊥-step without verdict".into())),
                (RuleTag::BotU, Some(Tri::No)) => {
                    return Err(invalid("⊥-step on a non-member".into()))
                }
                _ => {}
            }
            let expected =
                step_at(prev, &step.position, step.rule).map_err(|e| invalid(e.to_string()))?;
            if !bisim_up_to(&expected, &step.result, depth) {
                return Err(invalid(
                    "recorded result differs from the contraction".into(),
                ));
            }
            prev = &step.result;
        }
        Ok(())
    }

    /// Serializes as JSON lines: one header, then one record per step.
    pub fn to_json_lines(&self, mut header: TraceHeader) -> String {
        let d = header.snapshot_depth;
        header.start = self.start.truncate(d);
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for (i, step) in self.steps.iter().enumerate() {
            let rec = StepRecord {
                i,
                pos: step.position.clone(),
                rule: step.rule,
                depth: step.depth,
                verdict: step.verdict.as_ref().map(|v| v.label().to_string()),
                snapshot: step.result.truncate(d),
            };
            out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

/// First line of a trace file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub kind: String,
    /// Source text of the start term, when it came from the parser.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    pub snapshot_depth: usize,
    pub config: serde_json::Value,
    pub start: FiniteTerm,
}

impl TraceHeader {
    pub fn new(term: Option<String>, snapshot_depth: usize, config: serde_json::Value) -> Self {
        TraceHeader {
            kind: "header".into(),
            term,
            snapshot_depth,
            config,
            start: FiniteTerm::Bot,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub i: usize,
    pub pos: Position,
    pub rule: RuleTag,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub snapshot: FiniteTerm,
}

/// A parsed trace file.
#[derive(Clone, Debug)]
pub struct TraceFile {
    pub header: TraceHeader,
    pub records: Vec<StepRecord>,
}

impl TraceFile {
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let fmt_err =
            |line: usize, e: serde_json::Error| ReductionError::Format(format!("line {line}: {e}"));
        let header: TraceHeader = serde_json::from_str(
            lines
                .next()
                .ok_or_else(|| ReductionError::Format("empty trace file".into()))?,
        )
        .map_err(|e| fmt_err(1, e))?;
        let records = lines
            .enumerate()
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| fmt_err(i + 2, e)))
            .collect::<Result<Vec<StepRecord>, _>>()?;
        for (i, r) in records.iter().enumerate() {
            if r.i != i {
                return Err(ReductionError::Format(format!(
                    "record {i} is numbered {}",
                    r.i
                )));
            }
        }
        Ok(TraceFile { header, records })
    }

    /// Re-executes the recorded steps from `start`, checking each snapshot.
    pub fn replay(&self, start: &Coterm) -> Result<Trace, ReductionError> {
        let d = self.header.snapshot_depth;
        if start.truncate(d) != self.header.start {
            return Err(ReductionError::InvalidTrace(
                "start term does not match the header snapshot".into(),
            ));
        }
        let mut trace = Trace::new(start.clone());
        for r in &self.records {
            let verdict = match (r.rule, r.verdict.as_deref()) {
                (RuleTag::Beta, _) => None,
                (RuleTag::BotU, Some("Yes")) => Some(Tri::Yes),
                (RuleTag::BotU, Some("Unknown")) => Some(Tri::unknown("recorded as assumed")),
                (RuleTag::BotU, other) => {
                    return Err(ReductionError::InvalidTrace(format!(
                        "step {}: ⊥-step with verdict {other:?}",
                        r.i
                    )))
                }
            };
            if r.depth != r.pos.depth() {
                return Err(ReductionError::InvalidTrace(format!(
                    "step {}: depth {} does not match position {}",
                    r.i, r.depth, r.pos
                )));
            }
            let step = trace
                .push(r.pos.clone(), r.rule, verdict)
                .map_err(|e| ReductionError::InvalidTrace(format!("step {}: {e}", r.i)))?;
            if step.result.truncate(d) != r.snapshot {
                return Err(ReductionError::InvalidTrace(format!(
                    "step {}: snapshot mismatch",
                    r.i
                )));
            }
        }
        Ok(trace)
    }
}
