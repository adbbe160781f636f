//! Constructor syntax for functionals:
//!
//! ```text
//! delta(x0)            u ↦ u(x0)
//! ddelta(x0, alpha)    distributional ∂^α δ_{x0}: u ↦ (-1)^{|α|} ∂^α u(x0)
//! integrate(box...)    u ↦ ∫_box u; no box means the whole domain
//! density(expr)        u ↦ ∫ expr · u
//! scale(p, F)          ε^p · F
//! sum(F1, F2, ...)
//! multiply(u, F)       F(u · ·) for a net object u
//! apply(a, F)          a(x, D) F for a symbol object a
//! name                 another functional object
//! ```
//!
//! Points are numbers (1-D) or `[x, y]`; boxes are one `[lo, hi]` interval per
//! axis. Numeric arguments are constant expressions such as `-pi/2`.

use colombeau_core::expr::Env;
use colombeau_core::Expr;

#[derive(Debug, Clone, PartialEq)]
pub enum FunExpr {
    Delta { at: Vec<f64>, alpha: Vec<u32> },
    Integrate(Vec<[f64; 2]>),
    Density(String),
    Scale(f64, Box<FunExpr>),
    Sum(Vec<FunExpr>),
    Multiply(String, Box<FunExpr>),
    Apply(String, Box<FunExpr>),
    Ref(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DslError {
    /// Byte offset into the definition.
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for DslError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type R<T> = Result<T, DslError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> R<T> {
        Err(DslError { position: self.pos, message: message.into() })
    }

    fn ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> R<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> R<String> {
        self.ws();
        let rest = &self.src[self.pos..];
        let n = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-')).unwrap_or(rest.len());
        if n == 0 || !rest.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return self.err("expected a name");
        }
        self.pos += n;
        Ok(rest[..n].to_string())
    }

    /// Text up to the next `,`, `)` or `]` at bracket depth zero.
    fn raw(&mut self) -> R<(usize, &'a str)> {
        self.ws();
        let start = self.pos;
        let mut depth = 0i32;
        for (i, c) in self.src[start..].char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' if depth > 0 => depth -= 1,
                ',' | ')' | ']' if depth == 0 => {
                    self.pos = start + i;
                    let text = self.src[start..start + i].trim();
                    if text.is_empty() {
                        return self.err("empty argument");
                    }
                    return Ok((start, text));
                }
                _ => {}
            }
        }
        self.err("unterminated argument list")
    }

    fn number(&mut self) -> R<f64> {
        let (at, text) = self.raw()?;
        let e = Expr::parse(text).map_err(|e| DslError { position: at, message: e.to_string() })?;
        let v = e.eval_real(&Env::new());
        if !v.is_finite() {
            return Err(DslError { position: at, message: format!("'{text}' is not a finite constant") });
        }
        Ok(v)
    }

    fn list(&mut self) -> R<Vec<f64>> {
        self.expect('[')?;
        let mut out = vec![self.number()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.number()?);
        }
        self.expect(']')?;
        Ok(out)
    }

    fn point(&mut self) -> R<Vec<f64>> {
        if self.peek() == Some('[') {
            self.list()
        } else {
            Ok(vec![self.number()?])
        }
    }

    fn index(&mut self) -> R<Vec<u32>> {
        let at = self.pos;
        let v = self.point()?;
        v.iter()
            .map(|x| {
                if *x >= 0.0 && x.fract() == 0.0 && *x <= 8.0 {
                    Ok(*x as u32)
                } else {
                    Err(DslError { position: at, message: format!("{x} is not a derivative order") })
                }
            })
            .collect()
    }

    fn comma(&mut self) -> R<()> {
        self.expect(',')
    }

    fn term(&mut self) -> R<FunExpr> {
        self.ws();
        let start = self.pos;
        let name = self.ident()?;
        if self.peek() != Some('(') {
            return Ok(FunExpr::Ref(name));
        }
        self.pos += 1;
        let out = match name.as_str() {
            "delta" => FunExpr::Delta { at: self.point()?, alpha: Vec::new() },
            "ddelta" => {
                let at = self.point()?;
                self.comma()?;
                FunExpr::Delta { at, alpha: self.index()? }
            }
            "integrate" => {
                let mut boxes = Vec::new();
                while self.peek() == Some('[') {
                    let at = self.pos;
                    let iv = self.list()?;
                    if iv.len() != 2 || !(iv[1] > iv[0]) {
                        return Err(DslError { position: at, message: "an interval is [lo, hi] with lo < hi".into() });
                    }
                    boxes.push([iv[0], iv[1]]);
                    if self.peek() == Some(',') {
                        self.pos += 1;
                    }
                }
                FunExpr::Integrate(boxes)
            }
            "density" => {
                let (_, text) = self.raw()?;
                FunExpr::Density(text.to_string())
            }
            "scale" => {
                let p = self.number()?;
                self.comma()?;
                FunExpr::Scale(p, Box::new(self.term()?))
            }
            "sum" => {
                let mut terms = vec![self.term()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                FunExpr::Sum(terms)
            }
            "multiply" | "apply" => {
                let target = self.ident()?;
                self.comma()?;
                let f = Box::new(self.term()?);
                if name == "multiply" {
                    FunExpr::Multiply(target, f)
                } else {
                    FunExpr::Apply(target, f)
                }
            }
            _ => return Err(DslError { position: start, message: format!("unknown constructor '{name}'") }),
        };
        self.expect(')')?;
        Ok(out)
    }
}

pub fn parse(src: &str) -> Result<FunExpr, DslError> {
    let mut p = Parser { src, pos: 0 };
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(t)
}

impl FunExpr {
    /// Names referenced as `(functionals, nets, symbols)`.
    pub fn references(&self) -> (Vec<String>, Vec<String>, Vec<String>) {
        let mut out = (Vec::new(), Vec::new(), Vec::new());
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut (Vec<String>, Vec<String>, Vec<String>)) {
        match self {
            FunExpr::Ref(n) => out.0.push(n.clone()),
            FunExpr::Multiply(u, f) => {
                out.1.push(u.clone());
                f.collect(out);
            }
            FunExpr::Apply(a, f) => {
                out.2.push(a.clone());
                f.collect(out);
            }
            FunExpr::Scale(_, f) => f.collect(out),
            FunExpr::Sum(fs) => fs.iter().for_each(|f| f.collect(out)),
            FunExpr::Delta { .. } | FunExpr::Integrate(_) | FunExpr::Density(_) => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_constructors() {
        assert_eq!(parse("delta(0)").unwrap(), FunExpr::Delta { at: vec![0.0], alpha: vec![] });
        assert_eq!(
            parse("ddelta([1, -pi/2], [1, 0])").unwrap(),
            FunExpr::Delta { at: vec![1.0, -core::f64::consts::FRAC_PI_2], alpha: vec![1, 0] }
        );
        assert_eq!(parse("integrate([0, 2])").unwrap(), FunExpr::Integrate(vec![[0.0, 2.0]]));
        assert_eq!(parse("integrate()").unwrap(), FunExpr::Integrate(vec![]));
        assert_eq!(parse("density(exp(-pow(x, 2)))").unwrap(), FunExpr::Density("exp(-pow(x, 2))".into()));
        let s = parse("sum(scale(-1, delta(0.5)), multiply(phi, t), apply(a, h))").unwrap();
        assert_eq!(s.references(), (vec!["t".into(), "h".into()], vec!["phi".into()], vec!["a".into()]));
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse("delta(0").unwrap_err().message, "unterminated argument list");
        assert_eq!(parse("  dleta(0)").unwrap_err().position, 2);
        assert!(parse("delta(0) x").is_err());
        assert!(parse("integrate([2, 1])").is_err());
        assert!(parse("ddelta(0, 1.5)").is_err());
    }
}
