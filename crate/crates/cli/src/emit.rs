//! Report serialization. Both formats are byte-stable: no timings, checks
//! in execution order, outputs in insertion order.

use deformq_core::report::SCHEMA_VERSION;
use deformq_core::{Report, Status};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct Machine<'a> {
    #[serde(flatten)]
    report: &'a Report,
    summary: String,
    passed: bool,
}

pub fn json(r: &Report) -> String {
    let m = Machine {
        report: r,
        summary: r.summary(),
        passed: r.all_passed(),
    };
    let mut s = serde_json::to_string_pretty(&m).expect("reports serialize");
    s.push('\n');
    s
}

pub fn text(r: &Report) -> String {
    let mut out = format!("# deformq {} (report schema {SCHEMA_VERSION})\n", r.command);
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        };
        if c.detail.is_empty() {
            out.push_str(&format!("[{tag}] {}\n", c.name));
        } else {
            out.push_str(&format!("[{tag}] {}: {}\n", c.name, c.detail));
        }
        for w in &c.witness {
            out.push_str(&format!("    {} = {}\n", w.label, w.expr));
        }
    }
    for o in &r.outputs {
        if o.expr.contains('\n') {
            out.push_str(&format!("{}:\n{}", o.label, o.expr));
            if !o.expr.ends_with('\n') {
                out.push('\n');
            }
        } else {
            out.push_str(&format!("{} = {}\n", o.label, o.expr));
        }
    }
    if !r.checks.is_empty() {
        out.push_str(&format!("summary {}\n", r.summary()));
    }
    out
}

pub fn render(r: &Report, f: Format) -> String {
    match f {
        Format::Text => text(r),
        Format::Json => json(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use deformq_core::{CheckRecord, Witness};

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new("check-mc");
        assert_eq!(text(&r), "# deformq check-mc (report schema 1)\n");
        let j: serde_json::Value = serde_json::from_str(&json(&r)).unwrap();
        assert_eq!(j["checks"].as_array().unwrap().len(), 0);
        assert_eq!(j["schema_version"], 1);
    }

    #[test]
    fn single_pass() {
        let mut r = Report::new("demo");
        r.push(CheckRecord::pass("mc_defect", ""));
        assert!(text(&r).ends_with("[pass] mc_defect\nsummary 1/1\n"));
        let j: serde_json::Value = serde_json::from_str(&json(&r)).unwrap();
        assert_eq!(j["summary"], "1/1");
        assert_eq!(j["checks"][0]["status"], "pass");
    }

    #[test]
    fn failure_prints_witness() {
        let mut r = Report::new("demo");
        r.push(CheckRecord::fail("mc_defect", "nonzero", vec![Witness::new("defect", "h*(D[1|1])")]));
        assert!(text(&r).contains("    defect = h*(D[1|1])\n"));
        assert!(json(&r).contains("\"expr\": \"h*(D[1|1])\""));
    }
}
