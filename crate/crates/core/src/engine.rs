//! The active querying loop with generalized binary search as the selection rule.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::instance::Instance;
use crate::rational::{self, Rational};
use crate::version_space::{best_split_test, restrict, VersionSpace};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("answer {outcome} to test {test:?} at step {step} leaves no consistent hypothesis")]
    InconsistentOracle {
        step: usize,
        test: String,
        outcome: u8,
    },
    #[error("query budget of {0} exceeded")]
    QueryBudgetExceeded(usize),
    #[error("scripted oracle ran out of answers after {0} queries")]
    ScriptExhausted(usize),
    #[error("answer channel closed before identification")]
    ChannelClosed,
    #[error("unknown hypothesis {0:?}")]
    UnknownHypothesis(String),
    #[error("unknown test {0:?}")]
    UnknownTest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EngineError {
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::InconsistentOracle { .. } => "InconsistentOracle",
            EngineError::QueryBudgetExceeded(_) => "QueryBudgetExceeded",
            EngineError::ScriptExhausted(_) => "ScriptExhausted",
            EngineError::ChannelClosed => "ChannelClosed",
            EngineError::UnknownHypothesis(_) => "UnknownHypothesis",
            EngineError::UnknownTest(_) => "UnknownTest",
            EngineError::Io(_) => "Io",
        }
    }
}

/// Source of answers `h*(x)`.
pub trait Oracle {
    fn id(&self) -> String;
    fn answer(&mut self, instance: &Instance, test: usize) -> Result<bool, EngineError>;
}

/// Answers as a fixed hypothesis would.
#[derive(Debug, Clone, Copy)]
pub struct HypothesisOracle(pub usize);

impl Oracle for HypothesisOracle {
    fn id(&self) -> String {
        format!("#{}", self.0)
    }

    fn answer(&mut self, instance: &Instance, test: usize) -> Result<bool, EngineError> {
        Ok(instance.outcome(self.0, test))
    }
}

/// Replays a fixed answer list, regardless of which test is asked.
#[derive(Debug, Clone)]
pub struct ScriptedOracle {
    answers: Vec<bool>,
    next: usize,
}

impl ScriptedOracle {
    pub fn new(answers: Vec<bool>) -> Self {
        ScriptedOracle { answers, next: 0 }
    }
}

impl Oracle for ScriptedOracle {
    fn id(&self) -> String {
        "scripted".to_string()
    }

    fn answer(&mut self, _: &Instance, _: usize) -> Result<bool, EngineError> {
        let a = self
            .answers
            .get(self.next)
            .copied()
            .ok_or(EngineError::ScriptExhausted(self.next))?;
        self.next += 1;
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub test: String,
    pub outcome: bool,
    pub size_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub oracle_id: String,
    pub steps: Vec<Step>,
    pub identified: String,
    pub query_count: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Safety cap; `None` means `n` queries.
    pub budget: Option<usize>,
}


/// Runs the loop until one hypothesis remains.
pub fn run_gbs<O: Oracle + ?Sized>(
    instance: &Instance,
    oracle: &mut O,
) -> Result<Transcript, EngineError> {
    run_gbs_with(instance, oracle, RunOptions::default())
}

pub fn run_gbs_with<O: Oracle + ?Sized>(
    instance: &Instance,
    oracle: &mut O,
    options: RunOptions,
) -> Result<Transcript, EngineError> {
    let budget = options.budget.unwrap_or(instance.n());
    let mut space = VersionSpace::full(instance);
    let mut steps = Vec::new();
    while space.len() > 1 {
        if steps.len() >= budget {
            return Err(EngineError::QueryBudgetExceeded(budget));
        }
        let (test, split) = best_split_test(&space).expect("space is nonempty");
        debug_assert!(split.minority() > 0, "identifiability guarantees progress");
        let outcome = oracle.answer(instance, test)?;
        let next = restrict(&space, test, outcome);
        if next.is_empty() {
            return Err(EngineError::InconsistentOracle {
                step: steps.len() + 1,
                test: instance.tests()[test].id.clone(),
                outcome: u8::from(outcome),
            });
        }
        space = next;
        steps.push(Step {
            test: instance.tests()[test].id.clone(),
            outcome,
            size_after: space.len(),
        });
    }
    let identified = space.iter().next().expect("one hypothesis remains");
    Ok(Transcript {
        oracle_id: oracle.id(),
        query_count: steps.len(),
        steps,
        identified: instance.hypotheses()[identified].id.clone(),
    })
}

/// Runs with `h*` fixed to the hypothesis with the given index; the transcript
/// carries that hypothesis' id.
pub fn run_for_hypothesis(instance: &Instance, hypothesis: usize) -> Result<Transcript, EngineError> {
    let mut t = run_gbs(instance, &mut HypothesisOracle(hypothesis))?;
    t.oracle_id = instance.hypotheses()[hypothesis].id.clone();
    Ok(t)
}

pub fn run_for_id(instance: &Instance, id: &str) -> Result<Transcript, EngineError> {
    let h = instance
        .hypothesis_index(id)
        .ok_or_else(|| EngineError::UnknownHypothesis(id.to_string()))?;
    run_for_hypothesis(instance, h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostStats {
    pub worst_case: usize,
    pub average: Rational,
    pub per_oracle: BTreeMap<String, usize>,
}

/// One run per hypothesis as `h*`, plus the transcripts in hypothesis order.
pub fn run_all_transcripts(instance: &Instance) -> Result<Vec<Transcript>, EngineError> {
    (0..instance.n())
        .into_par_iter()
        .map(|h| run_for_hypothesis(instance, h))
        .collect()
}

pub fn cost_stats(transcripts: &[Transcript]) -> CostStats {
    let total: usize = transcripts.iter().map(|t| t.query_count).sum();
    CostStats {
        worst_case: transcripts.iter().map(|t| t.query_count).max().unwrap_or(0),
        average: rational::from_count(total, transcripts.len().max(1)),
        per_oracle: transcripts
            .iter()
            .map(|t| (t.oracle_id.clone(), t.query_count))
            .collect(),
    }
}

pub fn run_all_oracles(instance: &Instance) -> CostStats {
    let transcripts =
        run_all_transcripts(instance).expect("simulated oracles are consistent by construction");
    cost_stats(&transcripts)
}

/// Re-applies recorded `(test, outcome)` pairs from the full space and returns
/// the version-space size after each one.
pub fn replay(instance: &Instance, steps: &[Step]) -> Result<Vec<usize>, EngineError> {
    let mut space = VersionSpace::full(instance);
    let mut sizes = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        let x = instance
            .test_index(&step.test)
            .ok_or_else(|| EngineError::UnknownTest(step.test.clone()))?;
        space = restrict(&space, x, step.outcome);
        if space.is_empty() {
            return Err(EngineError::InconsistentOracle {
                step: i + 1,
                test: step.test.clone(),
                outcome: u8::from(step.outcome),
            });
        }
        sizes.push(space.len());
    }
    Ok(sizes)
}

/// Answers read from a line channel, one `QUERY` line per selected test.
pub struct LineOracle<'w, R, W> {
    input: R,
    output: &'w mut W,
}

impl<'w, R: BufRead, W: Write> LineOracle<'w, R, W> {
    pub fn new(input: R, output: &'w mut W) -> Self {
        LineOracle { input, output }
    }
}

impl<R: BufRead, W: Write> Oracle for LineOracle<'_, R, W> {
    fn id(&self) -> String {
        "interactive".to_string()
    }

    fn answer(&mut self, instance: &Instance, test: usize) -> Result<bool, EngineError> {
        let rec = &instance.tests()[test];
        let meta = serde_json::to_string(&rec.meta).expect("meta is plain JSON");
        let query = format!("QUERY {} {}\n", rec.id, meta);
        self.output.write_all(query.as_bytes())?;
        self.output.flush()?;
        loop {
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(EngineError::ChannelClosed);
            }
            match line.trim() {
                "0" => return Ok(false),
                "1" => return Ok(true),
                _ => {
                    self.output.write_all(b"RETRY expected 0 or 1\n")?;
                    self.output.write_all(query.as_bytes())?;
                    self.output.flush()?;
                }
            }
        }
    }
}

/// Plays `h*` over a line channel.
///
/// Writes `QUERY <test-id> <meta-json>` and reads `0` or `1`; anything else
/// gets `RETRY expected 0 or 1` and the query again. Ends with
/// `IDENTIFIED <hypothesis-id>`.
pub fn interactive_session<R: BufRead, W: Write>(
    instance: &Instance,
    input: R,
    output: &mut W,
) -> Result<Transcript, EngineError> {
    let transcript = run_gbs(instance, &mut LineOracle::new(input, output))?;
    writeln!(output, "IDENTIFIED {}", transcript.identified)?;
    output.flush()?;
    Ok(transcript)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::from_matrix;
    use crate::rational::ratio;

    fn three_way() -> Instance {
        from_matrix("three", &[&[0, 0, 1], &[0, 1, 1], &[1, 1, 1]]).unwrap()
    }

    #[test]
    fn singleton_needs_no_queries() {
        let inst = from_matrix("one", &[&[1, 0]]).unwrap();
        let t = run_for_hypothesis(&inst, 0).unwrap();
        assert_eq!(t.query_count, 0);
        assert_eq!(t.identified, "h0");
    }

    #[test]
    fn pair_costs_one_query() {
        let inst = from_matrix("two", &[&[0, 1], &[1, 1]]).unwrap();
        let stats = run_all_oracles(&inst);
        assert_eq!(stats.worst_case, 1);
        assert_eq!(stats.average, ratio(1, 1));
    }

    #[test]
    fn every_oracle_is_identified() {
        let inst = three_way();
        for h in 0..inst.n() {
            let t = run_for_hypothesis(&inst, h).unwrap();
            assert_eq!(t.identified, inst.hypotheses()[h].id);
            assert_eq!(t.query_count, t.steps.len());
            assert!(t.steps.windows(2).all(|w| w[0].size_after > w[1].size_after));
        }
    }

    #[test]
    fn scripted_answers_always_land_on_a_consistent_hypothesis() {
        // every selected test splits V, so no answer sequence can empty it
        let inst = three_way();
        for script in [[false, false], [false, true], [true, false], [true, true]] {
            let t = run_gbs(&inst, &mut ScriptedOracle::new(script.to_vec())).unwrap();
            let h = inst.hypothesis_index(&t.identified).unwrap();
            for step in &t.steps {
                let x = inst.test_index(&step.test).unwrap();
                assert_eq!(inst.outcome(h, x), step.outcome);
            }
        }
    }

    #[test]
    fn replay_detects_contradictions() {
        let inst = three_way();
        let t = run_for_hypothesis(&inst, 1).unwrap();
        let sizes = replay(&inst, &t.steps).unwrap();
        assert_eq!(sizes, t.steps.iter().map(|s| s.size_after).collect::<Vec<_>>());

        let contradictory = vec![
            Step { test: "x0".into(), outcome: true, size_after: 1 },
            Step { test: "x2".into(), outcome: false, size_after: 0 },
        ];
        let err = replay(&inst, &contradictory).unwrap_err();
        assert!(matches!(err, EngineError::InconsistentOracle { step: 2, .. }));
    }

    #[test]
    fn budget_is_enforced() {
        let inst = three_way();
        let err = run_gbs_with(
            &inst,
            &mut HypothesisOracle(0),
            RunOptions { budget: Some(0) },
        )
        .unwrap_err();
        assert!(matches!(err, EngineError::QueryBudgetExceeded(0)));
    }

    #[test]
    fn interactive_matches_simulated_run() {
        let inst = three_way();
        for h in 0..inst.n() {
            let expected = run_for_hypothesis(&inst, h).unwrap();
            let answers: String = expected
                .steps
                .iter()
                .map(|s| if s.outcome { "1\n" } else { "0\n" })
                .collect();
            let mut out = Vec::new();
            let t = interactive_session(&inst, answers.as_bytes(), &mut out).unwrap();
            assert_eq!(t.steps, expected.steps);
            assert_eq!(t.oracle_id, "interactive");
            let text = String::from_utf8(out).unwrap();
            assert!(text.ends_with(&format!("IDENTIFIED {}\n", expected.identified)));
            assert_eq!(text.matches("QUERY ").count(), expected.query_count);
        }
    }

    #[test]
    fn interactive_reprompts_on_malformed_input() {
        let inst = from_matrix("two", &[&[0, 1], &[1, 1]]).unwrap();
        let mut out = Vec::new();
        let t = interactive_session(&inst, "2\n1\n".as_bytes(), &mut out).unwrap();
        assert_eq!(t.identified, "h1");
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "QUERY x0 {}\nRETRY expected 0 or 1\nQUERY x0 {}\nIDENTIFIED h1\n"
        );
    }

    #[test]
    fn interactive_eof_is_reported() {
        let inst = three_way();
        let mut out = Vec::new();
        let err = interactive_session(&inst, "".as_bytes(), &mut out).unwrap_err();
        assert!(matches!(err, EngineError::ChannelClosed));
    }
}
