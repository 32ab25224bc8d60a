//! Human-readable summaries of documents and check reports.

use std::fmt::Write as _;

use atlas_core::{AtlasDocument, CheckReport, Verdict};

pub fn report_line(r: &CheckReport) -> String {
    let verdict = match r.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    };
    let mut line = format!("{verdict:12} {:32} margin {:.3e}", r.name, r.margin);
    if let Some(reason) = &r.reason {
        let _ = write!(line, "  ({reason})");
    }
    if !r.witnesses.is_empty() {
        let _ = write!(line, "  [{} witness(es)]", r.witnesses.len());
    }
    line
}

pub fn summarize(doc: &AtlasDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "spec: {}", doc.spec);
    if let Some(w) = doc.window {
        let _ = writeln!(
            out,
            "window: [{}, {}] x [{}, {}] grid {}x{}",
            w.rect.sigma_min, w.rect.sigma_max, w.rect.t_min, w.rect.t_max, w.nx, w.ny
        );
    }
    let _ = writeln!(
        out,
        "curves: {}   zeros: {}   strips: {}   domains: {}",
        doc.curves.len(),
        doc.zeros.len(),
        doc.strips.len(),
        doc.domains.len()
    );
    for s in &doc.strips {
        let _ = writeln!(
            out,
            "  strip k={:+} m_k={} j={:?}{}{}",
            s.k,
            s.zero_count,
            s.j_indices,
            if s.contains_one { "  contains s=1" } else { "" },
            if s.partial { "  (partial)" } else { "" }
        );
    }
    for t in &doc.merge_trees {
        let _ = writeln!(
            out,
            "  merge tree strip {:+}: {} leaves, {} branch points, root radius {:.6}",
            t.strip,
            t.leaf_count(),
            t.internal_count(),
            t.root_radius
        );
    }
    for z in &doc.zeros {
        let _ = writeln!(
            out,
            "  zero {:?} at {:+.9}{:+.9}i order {} residual {:.2e} strip {:?}",
            z.target, z.location.re, z.location.im, z.order, z.residual, z.strip
        );
    }
    if !doc.reports.is_empty() {
        let _ = writeln!(out, "checks:");
        for r in &doc.reports {
            let _ = writeln!(out, "  {}", report_line(r));
        }
    }
    if let Some(lab) = &doc.lab {
        let _ = writeln!(
            out,
            "involution lab: pair {} / {}, {} samples, residuals {:.3e} / {:.3e}, ratio dev {:.3e}",
            lab.s1, lab.s2, lab.samples, lab.max_involution_residual, lab.max_value_residual,
            lab.max_phi_deviation
        );
    }
    out
}
