//! The serializable analysis report produced by the `analyze` pipeline.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Frame, StructureFunctions};
use crate::normalization::{extension_normality_report, CurvatureReport, Entry, ExtensionVerdict, Normalizer};
use crate::parse::parse_frame_file;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct AnalysisReport {
    pub l: usize,
    pub nondegenerate: bool,
    pub structure_functions: Vec<Entry>,
    pub A: Vec<Entry>,
    pub C: Vec<Entry>,
    pub E: Vec<Entry>,
    pub F: Vec<Entry>,
    pub P: Vec<Entry>,
    pub R: Vec<Entry>,
    pub S: Vec<Entry>,
    pub T: Vec<Entry>,
    pub flat: bool,
    pub kappa11_deg2_zero: bool,
    pub extension_verdict: ExtensionVerdict,
}

fn frame_label(l: usize, a: usize) -> String {
    if a < l {
        format!("{}", a + 1)
    } else {
        let (j, k) = crate::chart::pairs(l)[a - l];
        format!("[{}{}]", j + 1, k + 1)
    }
}

/// Nonzero structure functions as `^a_bc` entries with `b < c`.
pub fn structure_entries(l: usize, sf: &StructureFunctions) -> Vec<Entry> {
    sf.nonzero_entries()
        .into_iter()
        .map(|(a, b, c, v)| Entry {
            index: format!("^{}_{}{}", frame_label(l, a), frame_label(l, b), frame_label(l, c)),
            value: v.to_string(),
        })
        .collect()
}

impl AnalysisReport {
    pub fn build(sf: &StructureFunctions, r: &CurvatureReport) -> Self {
        let d = &r.connection;
        let t = &r.tensors;
        AnalysisReport {
            l: r.l,
            nondegenerate: true,
            structure_functions: structure_entries(r.l, sf),
            A: d.a.entries(),
            C: d.c.entries(),
            E: d.e.entries(),
            F: d.f.entries(),
            P: t.p.entries(),
            R: t.r.entries(),
            S: t.s.entries(),
            T: t.t.entries(),
            flat: r.flat,
            kappa11_deg2_zero: r.kappa11_deg2_zero,
            extension_verdict: extension_normality_report(r).verdict,
        }
    }

    /// Multi-line human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!("rank l = {}\nnondegenerate: {}\n", self.l, self.nondegenerate);
        let groups: [(&str, &Vec<Entry>); 9] = [
            ("f", &self.structure_functions),
            ("A", &self.A),
            ("C", &self.C),
            ("E", &self.E),
            ("F", &self.F),
            ("P", &self.P),
            ("R", &self.R),
            ("S", &self.S),
            ("T", &self.T),
        ];
        for (name, es) in groups {
            if es.is_empty() {
                out.push_str(&format!("{name}: 0\n"));
            } else {
                out.push_str(&format!("{name}: {} nonzero\n", es.len()));
                for e in es {
                    out.push_str(&format!("  {name}{} = {}\n", e.index, e.value));
                }
            }
        }
        out.push_str(&format!("flat: {}\n", self.flat));
        out.push_str(&format!("kappa11 zero through homogeneity 2: {}\n", self.kappa11_deg2_zero));
        out.push_str(&format!("extension verdict: {:?} (homogeneities 1 and 2 only)\n", self.extension_verdict));
        out
    }
}

/// Runs the whole pipeline on frame-file text.
pub fn analyze_text(text: &str) -> Result<AnalysisReport> {
    let spec = parse_frame_file(text)?;
    let frame = Frame::new(spec.chart, spec.fields, None)?;
    let sf = StructureFunctions::compute(&frame)?;
    let n = Normalizer::new(frame.l())?;
    let r = n.analyze(&frame, &sf)?;
    Ok(AnalysisReport::build(&sf, &r))
}
