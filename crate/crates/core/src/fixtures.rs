//! The two reference distributions: the flat model and its deformation by
//! a single `y[1,2]·∂y[3,4]` term. Both are provided as frame-file text so
//! the shipped fixture files and the in-process builders stay identical.

use crate::geometry::Frame;
use crate::parse::parse_frame_file;

fn flat_line(l: usize, i: usize) -> String {
    let mut s = format!("Dx{i}");
    for p in i + 1..=l {
        s.push_str(&format!(" - x{p}*Dy[{i},{p}]"));
    }
    s
}

/// Frame file for the flat model `X_i = ∂x_i − Σ_{p>i} x_p ∂y_[ip]`.
pub fn flat_text(l: usize) -> String {
    let mut out = format!("# flat model, rank {l}\nl: {l}\n");
    for i in 1..=l {
        out.push_str(&format!("X{i}: {}\n", flat_line(l, i)));
    }
    out
}

/// Frame file for the flat model with `X_1` replaced by `X_1 + y[1,2]·∂y[3,4]`
/// (requires `l ≥ 4`).
pub fn armstrong_text(l: usize) -> String {
    assert!(l >= 4, "the deformation uses the pair [3,4]");
    let mut out = format!("# flat model deformed by y[1,2]*Dy[3,4] in X1, rank {l}\nl: {l}\n");
    for i in 1..=l {
        let extra = if i == 1 { " + y[1,2]*Dy[3,4]" } else { "" };
        out.push_str(&format!("X{i}: {}{extra}\n", flat_line(l, i)));
    }
    out
}

/// Frame file for the flat model with extra terms `coeff·∂y[p,q]` added to
/// the fields. Each term is `(field, coefficient text, (p, q))`, 1-based.
pub fn perturbed_text(l: usize, terms: &[(usize, String, (usize, usize))]) -> String {
    let mut out = format!("# flat model with {} added terms, rank {l}\nl: {l}\n", terms.len());
    for i in 1..=l {
        let mut line = flat_line(l, i);
        for (f, c, (p, q)) in terms {
            if *f == i {
                line.push_str(&format!(" + ({c})*Dy[{p},{q}]"));
            }
        }
        out.push_str(&format!("X{i}: {line}\n"));
    }
    out
}

fn build(text: &str) -> Frame {
    let spec = parse_frame_file(text).expect("fixture parses");
    Frame::new(spec.chart, spec.fields, None).expect("fixture is a valid frame")
}

pub fn flat_frame(l: usize) -> Frame {
    build(&flat_text(l))
}

pub fn armstrong_frame(l: usize) -> Frame {
    build(&armstrong_text(l))
}
