// SPDX-License-Identifier: Apache-2.0

//! JSON and self-contained HTML rendering of profile reports.

use std::fmt::Write as _;

use netkit::stats::Correlation;

use crate::profile::{MeasureReport, MeasureStatus, ProfileReport};

pub fn to_json(report: &ProfileReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<ProfileReport> {
    serde_json::from_str(text)
}

pub fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() >= 1e4 || x.abs() < 1e-3 {
        format!("{x:.4e}")
    } else {
        format!("{x:.4}")
    }
}

fn fmt_corr(c: Correlation) -> String {
    match c {
        Correlation::Value(x) => format!("{x:.3}"),
        Correlation::Degenerate => "\u{2014}".into(),
    }
}

// Cell background for a coefficient: blue for positive, red for negative.
fn corr_color(c: Correlation) -> String {
    match c {
        Correlation::Value(x) => {
            let a = x.abs().min(1.0) * 0.6;
            if x >= 0.0 {
                format!("rgba(40,90,200,{a:.3})")
            } else {
                format!("rgba(200,50,40,{a:.3})")
            }
        }
        Correlation::Degenerate => "#eee".into(),
    }
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em;color:#222}\
table{border-collapse:collapse;margin:1em 0}\
td,th{border:1px solid #ccc;padding:4px 8px;text-align:right}\
th{background:#f4f4f4}\
.hist{display:flex;align-items:flex-end;height:120px;gap:1px;border-bottom:1px solid #888}\
.bar{background:#4a78c2;flex:1;min-width:2px}\
.failed{color:#a00}\
section{margin-bottom:2em}";

fn write_histogram(out: &mut String, m: &MeasureReport) {
    let Some(h) = &m.histogram else { return };
    let max = h.counts.iter().copied().max().unwrap_or(0).max(1);
    out.push_str("<div class=\"hist\">");
    for (i, &c) in h.counts.iter().enumerate() {
        let pct = 100.0 * c as f64 / max as f64;
        let _ = write!(
            out,
            "<div class=\"bar\" style=\"height:{pct:.1}%\" title=\"[{}, {}): {c}\"></div>",
            fmt_num(h.edges[i]),
            fmt_num(h.edges[i + 1])
        );
    }
    out.push_str("</div>");
    if let (Some(lo), Some(hi)) = (h.edges.first(), h.edges.last()) {
        let _ = write!(out, "<p>range {} to {}, {} bins</p>", fmt_num(*lo), fmt_num(*hi), h.counts.len());
    }
}

pub fn to_html(report: &ProfileReport) -> String {
    let g = &report.graph;
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\">");
    out.push_str("<title>netkit profile</title><style>");
    out.push_str(STYLE);
    out.push_str("</style></head><body>\n<h1>Network profile</h1>\n");
    if let Some(t) = report.generated_at {
        let _ = writeln!(out, "<p>generated at unix time {t}</p>");
    }

    out.push_str("<section><h2>Graph</h2><table>\n");
    let clustering = g.mean_clustering.map_or("\u{2014}".to_string(), fmt_num);
    let diameter = format!(
        "{}{}",
        g.diameter.value,
        if g.diameter.exact { "" } else { " (lower bound)" }
    );
    let rows = [
        ("vertices", g.n.to_string()),
        ("edges", g.m.to_string()),
        ("directed", g.directed.to_string()),
        ("weighted", g.weighted.to_string()),
        ("density", fmt_num(g.density)),
        ("connected components", g.components.to_string()),
        ("mean clustering", clustering),
        ("diameter", diameter),
    ];
    for (k, v) in rows {
        let _ = writeln!(out, "<tr><th>{k}</th><td>{}</td></tr>", escape_html(&v));
    }
    out.push_str("</table></section>\n");

    for m in &report.measures {
        let _ = write!(out, "<section><h2>{}</h2>", escape_html(&m.name));
        if let Some(note) = &m.note {
            let class = if m.status == MeasureStatus::Failed { " class=\"failed\"" } else { "" };
            let _ = write!(out, "<p{class}>{}</p>", escape_html(note));
        }
        write_histogram(&mut out, m);
        if let Some(s) = &m.summary {
            out.push_str("<table><tr><th>min</th><th>max</th><th>mean</th><th>median</th><th>stddev</th><th>gini</th></tr><tr>");
            for x in [s.min, s.max, s.mean, s.median, s.stddev, s.gini] {
                let _ = write!(out, "<td>{}</td>", fmt_num(x));
            }
            out.push_str("</tr></table>");
        }
        out.push_str("</section>\n");
    }

    let c = &report.correlation;
    out.push_str("<section><h2>Spearman rank correlation</h2><table><tr><th></th>");
    for name in &c.measures {
        let _ = write!(out, "<th>{}</th>", escape_html(name));
    }
    out.push_str("</tr>\n");
    for (name, row) in c.measures.iter().zip(&c.matrix) {
        let _ = write!(out, "<tr><th>{}</th>", escape_html(name));
        for &v in row {
            let _ = write!(out, "<td style=\"background:{}\">{}</td>", corr_color(v), fmt_corr(v));
        }
        out.push_str("</tr>\n");
    }
    out.push_str("</table></section>\n");

    if !report.notes.is_empty() {
        out.push_str("<section><h2>Notes</h2><ul>");
        for n in &report.notes {
            let _ = write!(out, "<li>{}</li>", escape_html(n));
        }
        out.push_str("</ul></section>\n");
    }
    out.push_str("</body></html>\n");
    out
}
