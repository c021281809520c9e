//! Configuration-driven verification harness: runs suites over the `aqft`
//! library and assembles deterministic JSON reports and CSV tables.

pub mod config;
pub mod report;
pub mod suites;

use config::RunConfig;
use report::{Report, SuiteOutcome, SuiteStatus};
use suites::{run_suite, Context, Suite};

/// Run the selected suites in dependency order. A suite is skipped when a
/// prerequisite that ran in the same report did not pass.
pub fn run(cfg: &RunConfig) -> anyhow::Result<Report> {
    cfg.validate()?;
    let ctx = Context::new(cfg)?;
    let mut report = Report::empty();
    report.config = Some(cfg.clone());
    for suite in cfg.selected_suites() {
        let blocked = suite.prerequisites().iter().find(|p| {
            matches!(
                report.status(p.name()),
                Some(SuiteStatus::Failed | SuiteStatus::Skipped)
            )
        });
        if let Some(p) = blocked {
            report.suites.push(SuiteOutcome {
                suite: suite.name().into(),
                status: SuiteStatus::Skipped,
                reason: Some(format!("prerequisite suite '{}' did not pass", p.name())),
            });
            continue;
        }
        let out = run_suite(suite, &ctx);
        let strict = cfg.policy.strict_informational;
        let ok = out
            .records
            .iter()
            .all(|r| r.pass || (!r.mandatory && !strict));
        report.suites.push(SuiteOutcome {
            suite: suite.name().into(),
            status: if ok {
                SuiteStatus::Passed
            } else {
                SuiteStatus::Failed
            },
            reason: None,
        });
        report.records.extend(out.records);
        report.tables.extend(out.tables);
    }
    report.pass = report
        .suites
        .iter()
        .all(|s| s.status != SuiteStatus::Failed);
    Ok(report)
}

/// Names and one-line descriptions of all suites.
pub fn suite_list() -> Vec<(&'static str, &'static str)> {
    Suite::ALL
        .iter()
        .map(|s| (s.name(), s.description()))
        .collect()
}
