//! Validation suites built from [`crate::checks`].

use std::fmt::Write as _;

use crate::checks::{self, Check};
use crate::config::Suite;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.failed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// One line per check, then a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{c}");
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{verdict} suite={} checks={} failures={}",
            self.suite.as_str(),
            self.checks.iter().filter(|c| c.status != checks::Status::Info).count(),
            self.failures()
        );
        out
    }
}

pub fn run_validate(suite: Suite) -> Report {
    let checks = match suite {
        Suite::Su2 => {
            let mut v = checks::su2_closed_form();
            v.push(checks::entanglement_condition_grid());
            v.push(checks::coherent_null());
            v.push(checks::fock_su2());
            v.extend(checks::large_detuning_regime());
            v
        }
        Suite::Resonant => {
            vec![checks::resonant_closed_form(), checks::resonant_nonnegative(), checks::resonant_regime()]
        }
        Suite::Oracle => {
            let mut v = vec![checks::cross_integrator()];
            v.extend(checks::fig2_records().into_iter().map(|(c, _)| c));
            v
        }
        Suite::Steady => {
            let mut v = checks::steady_state();
            v.extend(checks::steady_reconciliation());
            v
        }
    };
    Report { suite, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_suite_passes_and_renders() {
        let r = run_validate(Suite::Resonant);
        assert!(r.passed(), "{}", r.render());
        let text = r.render();
        assert_eq!(text.lines().count(), r.checks.len() + 1);
        assert!(text.lines().last().unwrap().starts_with("PASS suite=resonant"));
    }

    #[test]
    fn steady_suite_records_reconciliation() {
        let r = run_validate(Suite::Steady);
        assert!(r.passed(), "{}", r.render());
        assert!(r.checks.iter().any(|c| c.name == "steady.reconcile.fig3" && c.status == checks::Status::Info));
    }

    #[test]
    fn any_failure_fails_the_report() {
        let check =
            |status| Check { name: "x".into(), status, measured: 1.0, tol: 0.5, elapsed: 0.0, detail: String::new() };
        let mut r =
            Report { suite: Suite::Su2, checks: vec![check(checks::Status::Pass), check(checks::Status::Info)] };
        assert!(r.passed());
        r.checks.push(check(checks::Status::Fail));
        assert!(!r.passed());
        assert!(r.render().ends_with("FAIL suite=su2 checks=2 failures=1\n"));
    }
}
