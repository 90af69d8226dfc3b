//! Text rendering for everything the binary emits: the refinement report
//! (key-value header plus three TSV tables), stand-alone score tables,
//! operational rules in rule syntax, and plot-ready comparison curves.
//!
//! All numeric columns are fixed at six decimal places so identical runs
//! render byte-identical files; wall-clock timings are deliberately kept
//! out of every rendering.

use std::fmt::Write;

use rascal_core::eval::Comparison;
use rascal_core::pipeline::RefineReport;
use rascal_core::rules::OperationalRule;
use rascal_core::schema::Schema;
use rascal_core::scoring::RuleScore;

pub fn render_scores_tsv(scores: &[RuleScore]) -> String {
    let mut out = String::from("rule_id\tL\tM\tS\tC\tE\tU_s\tG\tU\n");
    for s in scores {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            s.rule_id,
            s.literal_count,
            s.matched,
            s.correct,
            s.correctness,
            s.scope,
            s.sample_utility,
            s.generality,
            s.utility
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn render_report(report: &RefineReport) -> String {
    let mut out = String::new();
    let mut kv = |key: &str, value: String| {
        out.push_str(key);
        out.push('\t');
        out.push_str(&value);
        out.push('\n');
    };
    kv("input_rules", report.input_rules.to_string());
    kv("operational_rules", report.operational_rules.to_string());
    kv("dropped_unsatisfiable", report.dropped_unsatisfiable.to_string());
    kv("original_instances", report.original_instances.to_string());
    kv("generated", report.generated.to_string());
    kv("pruned", report.pruned.to_string());
    kv(
        "refined_instances",
        (report.original_instances - report.pruned + report.generated).to_string(),
    );
    kv("duplicates_of_original", report.duplicates_of_original.to_string());
    kv("duplicates_among_virtual", report.duplicates_among_virtual.to_string());
    kv("virtual_fraction", format!("{:.6}", report.config.virtual_fraction));
    kv("prune_threshold", format!("{:.6}", report.config.prune_threshold));
    kv("seed", report.config.seed.to_string());
    kv("max_rules", report.config.max_rules.to_string());
    kv("generate_enabled", report.config.generate_enabled.to_string());
    kv("prune_enabled", report.config.prune_enabled.to_string());

    out.push_str("\n[scores]\n");
    out.push_str(&render_scores_tsv(&report.scores));

    out.push_str("\n[allocations]\nrule_id\traw\tcount\n");
    for a in &report.allocations {
        writeln!(out, "{}\t{:.6}\t{}", a.rule_id, a.raw, a.count)
            .expect("writing to a String cannot fail");
    }

    out.push_str("\n[votes]\ninstance_index\tv_plus\tv_minus\tremoved\n");
    for v in &report.votes {
        writeln!(
            out,
            "{}\t{:.6}\t{:.6}\t{}",
            v.instance_index, v.v_plus, v.v_minus, v.removed
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// One rule per line in the surface syntax, e.g. `class=T <- a=T & !y=T.`;
/// the output parses back to the identical operational set.
pub fn render_rules(rules: &[OperationalRule], schema: &Schema) -> String {
    let mut out = String::new();
    for rule in rules {
        let head = format!(
            "{}={}",
            schema.class().name(),
            schema.class().domain()[rule.class_value]
        );
        let body: Vec<String> = rule
            .literals
            .iter()
            .map(|l| {
                let feature = schema.feature(l.feature);
                let bang = if l.negated { "!" } else { "" };
                format!("{bang}{}={}", feature.name(), feature.domain()[l.value])
            })
            .collect();
        debug_assert!(!body.is_empty(), "flattening never emits an empty conjunction");
        writeln!(out, "{head} <- {}.", body.join(" & "))
            .expect("writing to a String cannot fail");
    }
    out
}

pub fn render_curve_tsv(comparison: &Comparison) -> String {
    let mut out = String::from("x\tmean_orig\tsd_orig\tmean_refined\tsd_refined\n");
    for p in &comparison.points {
        writeln!(
            out,
            "{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            p.x, p.mean_original, p.sd_original, p.mean_refined, p.sd_refined
        )
        .expect("writing to a String cannot fail");
    }
    out
}
