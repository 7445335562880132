//! Text documents: a header fixing the ambient context, then named
//! expressions in the shared grammar.
//!
//! ```text
//! grammar_version = 1
//! d = 2
//! N = 3
//! kind = associative          # or poisson
//! omega : op = h*(D[1|2] - D[2|1]) \
//!     + h^2*(...)
//! gamma = h*x1*D[2|]
//! point = 1, 0                # parameters are plain text
//! ```
//!
//! `#` starts a comment, a trailing `\` continues a line. Binding
//! annotations are `fun`, `vec` or `op`; without one the kind is inferred.
//! Every binding is parsed on load so that errors carry document positions.

use std::collections::BTreeMap;

use deformq_core::deform::DeformationKind;
use deformq_core::polyring::{parse_expr, parse_fun, parse_op, parse_vec, Kind, Value};
use deformq_core::{Ambient, Error, Poly, PolyDiffOp, PolyVec, Result, Series};

pub const GRAMMAR_VERSION: u32 = 1;

/// Keys holding plain-text parameters rather than expressions.
const PARAMETERS: &[&str] = &["point"];

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub name: String,
    pub annotation: Option<Kind>,
    pub text: String,
    /// 1-based position of the first character of `text`.
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub nvars: usize,
    pub order: usize,
    pub kind: DeformationKind,
    bindings: Vec<Binding>,
    params: BTreeMap<String, (String, usize, usize)>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// A logical line: continuation joined, comments removed.
struct Logical {
    text: String,
    line: usize,
}

fn logical_lines(src: &str) -> Vec<Logical> {
    let mut out = Vec::new();
    let mut cur: Option<Logical> = None;
    for (i, raw) in src.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let (content, cont) = match content.trim_end().strip_suffix('\\') {
            Some(c) => (c, true),
            None => (content, false),
        };
        match cur.as_mut() {
            Some(l) => {
                l.text.push('\n');
                l.text.push_str(content);
            }
            None => {
                cur = Some(Logical {
                    text: content.to_string(),
                    line: i + 1,
                })
            }
        }
        if !cont {
            out.extend(cur.take());
        }
    }
    out.extend(cur);
    out
}

impl Document {
    pub fn parse(src: &str) -> Result<Document> {
        let mut header: BTreeMap<&str, (String, usize, usize)> = BTreeMap::new();
        let mut raw_bindings = Vec::new();
        let mut params = BTreeMap::new();
        let lines = logical_lines(src);
        for l in &lines {
            if l.text.trim().is_empty() {
                continue;
            }
            let indent = l.text.len() - l.text.trim_start().len();
            let Some(eq) = l.text.find('=') else {
                return Err(syntax(l.line, indent + 1, "expected `name = expression`"));
            };
            let lhs = l.text[..eq].trim();
            let rhs_start = eq + 1 + (l.text[eq + 1..].len() - l.text[eq + 1..].trim_start().len());
            let rhs = l.text[rhs_start..].trim_end().to_string();
            // column of the right-hand side on the first physical line
            let column = rhs_start + 1;
            if rhs.is_empty() {
                return Err(syntax(l.line, eq + 1, "missing right-hand side"));
            }
            let (name, annotation) = match lhs.split_once(':') {
                Some((n, a)) => {
                    let kind = match a.trim() {
                        "fun" => Kind::Fun,
                        "vec" => Kind::Vec,
                        "op" => Kind::Op,
                        other => {
                            return Err(syntax(
                                l.line,
                                indent + 1,
                                format!("unknown annotation `{other}`; expected fun, vec or op"),
                            ))
                        }
                    };
                    (n.trim(), Some(kind))
                }
                None => (lhs, None),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(syntax(l.line, indent + 1, format!("bad name `{name}`")));
            }
            match name {
                "grammar_version" | "d" | "N" | "kind" => {
                    if annotation.is_some() {
                        return Err(syntax(l.line, indent + 1, "header keys take no annotation"));
                    }
                    if header.insert(name_static(name), (rhs, l.line, column)).is_some() {
                        return Err(syntax(l.line, indent + 1, format!("duplicate header key `{name}`")));
                    }
                }
                n if PARAMETERS.contains(&n) => {
                    params.insert(n.to_string(), (rhs, l.line, column));
                }
                _ => {
                    if raw_bindings.iter().any(|b: &Binding| b.name == name) {
                        return Err(syntax(l.line, indent + 1, format!("duplicate binding `{name}`")));
                    }
                    raw_bindings.push(Binding {
                        name: name.to_string(),
                        annotation,
                        text: rhs,
                        line: l.line,
                        column,
                    });
                }
            }
        }

        let get = |key: &str| {
            header
                .get(key)
                .cloned()
                .ok_or_else(|| syntax(1, 1, format!("missing header key `{key}`")))
        };
        let number = |key: &str| -> Result<usize> {
            let (v, line, col) = get(key)?;
            v.trim()
                .parse::<usize>()
                .map_err(|_| syntax(line, col, format!("`{key}` must be a nonnegative integer")))
        };
        let version = number("grammar_version")?;
        if version != GRAMMAR_VERSION as usize {
            let (_, line, col) = get("grammar_version")?;
            return Err(syntax(line, col, format!("unsupported grammar_version {version}; expected {GRAMMAR_VERSION}")));
        }
        let nvars = number("d")?;
        if nvars == 0 {
            let (_, line, col) = get("d")?;
            return Err(syntax(line, col, "`d` must be at least 1"));
        }
        let order = number("N")?;
        let kind = match header.get("kind") {
            None => DeformationKind::Associative,
            Some((v, line, col)) => match v.trim() {
                "associative" => DeformationKind::Associative,
                "poisson" => DeformationKind::Poisson,
                other => return Err(syntax(*line, *col, format!("unknown kind `{other}`; expected associative or poisson"))),
            },
        };
        let doc = Document {
            nvars,
            order,
            kind,
            bindings: raw_bindings,
            params,
        };
        for b in &doc.bindings {
            let v = doc.locate(b, parse_expr(&b.text, &doc.ambient()))?;
            if let Some(k) = b.annotation {
                // zero and constants parse as functions and may stand for any kind
                if v.kind() != k && !(v.kind() == Kind::Fun && k != Kind::Fun && value_is_constant(&v)) {
                    return Err(syntax(b.line, b.column, format!("`{}` is annotated {:?} but parses as {:?}", b.name, k, v.kind())));
                }
            }
        }
        Ok(doc)
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::new(self.nvars, self.order)
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.name == name)
    }

    pub fn has(&self, name: &str) -> bool {
        self.binding(name).is_some()
    }

    /// Names `prefix`, `prefix1`, `prefix2`, ... in document order.
    pub fn family(&self, prefix: &str) -> Vec<&Binding> {
        self.bindings
            .iter()
            .filter(|b| b.name == prefix || b.name.strip_prefix(prefix).is_some_and(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit())))
            .collect()
    }

    fn locate<T>(&self, b: &Binding, r: Result<T>) -> Result<T> {
        r.map_err(|e| e.relocate(b.line - 1, b.column - 1))
    }

    fn require(&self, name: &str) -> Result<&Binding> {
        self.binding(name)
            .ok_or_else(|| syntax(1, 1, format!("document has no binding `{name}`")))
    }

    pub fn fun_of(&self, b: &Binding) -> Result<Series<Poly>> {
        self.locate(b, parse_fun(&b.text, &self.ambient()))
    }

    pub fn vec_of(&self, b: &Binding, degree: i32) -> Result<Series<PolyVec>> {
        self.locate(b, parse_vec(&b.text, &self.ambient(), degree))
            .map_err(|e| relabel(e, b))
    }

    pub fn op_of(&self, b: &Binding, degree: i32) -> Result<Series<PolyDiffOp>> {
        self.locate(b, parse_op(&b.text, &self.ambient(), degree))
            .map_err(|e| relabel(e, b))
    }

    pub fn fun(&self, name: &str) -> Result<Series<Poly>> {
        self.fun_of(self.require(name)?)
    }

    pub fn vec(&self, name: &str, degree: i32) -> Result<Series<PolyVec>> {
        self.vec_of(self.require(name)?, degree)
    }

    pub fn op(&self, name: &str, degree: i32) -> Result<Series<PolyDiffOp>> {
        self.op_of(self.require(name)?, degree)
    }

    /// A plain polynomial (the `h^0` part must be all there is).
    pub fn poly(&self, name: &str) -> Result<Poly> {
        let b = self.require(name)?;
        let f = self.fun_of(b)?;
        if f.coeffs()[1..].iter().any(|c| !c.is_zero()) {
            return Err(syntax(b.line, b.column, format!("`{name}` must not involve h")));
        }
        Ok(f.coeff(0).clone())
    }

    /// Comma-separated rationals of a parameter line.
    pub fn point(&self, name: &str) -> Result<Option<Vec<deformq_core::Q>>> {
        let Some((text, line, col)) = self.params.get(name) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for part in text.split(',') {
            let v: deformq_core::Q = part
                .trim()
                .parse()
                .map_err(|_| syntax(*line, *col, format!("`{}` is not a rational number", part.trim())))?;
            out.push(v);
        }
        if out.len() != self.nvars {
            return Err(syntax(*line, *col, format!("`{name}` needs {} coordinates", self.nvars)));
        }
        Ok(Some(out))
    }
}

fn value_is_constant(v: &Value) -> bool {
    match v {
        Value::Fun(f) => f.coeffs().iter().all(|p| p.as_constant().is_some()),
        _ => false,
    }
}

/// Degree errors carry no position; point them at the binding.
fn relabel(e: Error, b: &Binding) -> Error {
    match e {
        Error::DegreeMismatch { expected, got } => {
            syntax(b.line, b.column, format!("`{}` has degree {got}, expected {expected}", b.name))
        }
        other => other,
    }
}

fn name_static(name: &str) -> &'static str {
    match name {
        "grammar_version" => "grammar_version",
        "d" => "d",
        "N" => "N",
        _ => "kind",
    }
}
