//! Linear combinations of basis labels, e.g. `b1 + 2*b2 - 1/3 b3`, or a
//! coordinate tuple `(1, 0, 2)`.

use basisdiv::{AlgebraPresentation, Scalar, Vector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("empty expression")]
    Empty,
    #[error("unexpected '{found}' at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("bad coefficient '{text}': {reason}")]
    Coefficient { text: String, reason: String },
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
}

fn is_label_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn scalar(a: &AlgebraPresentation, text: &str) -> Result<Scalar, ExprError> {
    Scalar::parse(text, a.field()).map_err(|e| ExprError::Coefficient {
        text: text.to_string(),
        reason: e.to_string(),
    })
}

pub fn parse_element(a: &AlgebraPresentation, text: &str) -> Result<Vector, ExprError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ExprError::Empty);
    }
    if let Some(inner) = trimmed.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let coords = inner
            .split(',')
            .map(|c| scalar(a, c.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != a.dim() {
            return Err(ExprError::Arity {
                expected: a.dim(),
                got: coords.len(),
            });
        }
        return Ok(Vector::new(a.field(), coords).expect("field checked"));
    }

    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].1.is_whitespace() {
            *pos += 1;
        }
    };
    let unexpected = |pos: usize| match chars.get(pos) {
        Some(&(offset, c)) => ExprError::Unexpected {
            found: c.to_string(),
            offset,
        },
        None => ExprError::Unexpected {
            found: "end of input".into(),
            offset: text.len(),
        },
    };
    let mut out = Vector::zero(a.field(), a.dim());
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos == chars.len() {
            break;
        }
        let mut negative = false;
        match chars[pos].1 {
            '+' => pos += 1,
            '-' => {
                negative = true;
                pos += 1
            }
            _ if !first => return Err(unexpected(pos)),
            _ => {}
        }
        first = false;
        skip_ws(&mut pos);

        let start = pos;
        while pos < chars.len() && (chars[pos].1.is_ascii_digit() || chars[pos].1 == '/') {
            pos += 1;
        }
        let coef = if pos > start {
            let from = chars[start].0;
            let to = chars.get(pos).map_or(text.len(), |c| c.0);
            let c = scalar(a, &text[from..to])?;
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos].1 == '*' {
                pos += 1;
                skip_ws(&mut pos);
            }
            c
        } else {
            a.field().one()
        };

        if pos == chars.len() || !is_label_start(chars[pos].1) {
            return Err(unexpected(pos));
        }
        let start = pos;
        while pos < chars.len() && is_label_char(chars[pos].1) {
            pos += 1;
        }
        let from = chars[start].0;
        let to = chars.get(pos).map_or(text.len(), |c| c.0);
        let label = &text[from..to];
        let i = a
            .label_index(label)
            .ok_or_else(|| ExprError::UnknownLabel(label.to_string()))?;
        let coef = if negative { -coef } else { coef };
        out.add_scaled(&coef, &a.basis_vector(i));
    }
    if first {
        return Err(ExprError::Empty);
    }
    Ok(out)
}

/// Renders `v` in the syntax accepted by [`parse_element`].
pub fn render(a: &AlgebraPresentation, v: &Vector) -> String {
    let mut out = String::new();
    for (i, c) in v.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let text = c.to_string();
        let (negative, magnitude) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if magnitude != "1" {
            out.push_str(&magnitude);
            out.push('*');
        }
        out.push_str(&a.labels()[i]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
