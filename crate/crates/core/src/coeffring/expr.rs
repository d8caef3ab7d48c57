//! Text and JSON forms of [`Poly`], plus a small expression parser.

use rug::{Integer, Rational};
use serde_json::{json, Map, Value};

use super::params::{is_identifier, Params};
use super::poly::Poly;
use crate::error::{Error, Result};

impl Poly {
    /// Canonical text form: `coeff * name^exp * ...` joined by ` + `, highest
    /// term first; `0` for the zero polynomial.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let params = self.params();
        let mut parts = Vec::with_capacity(self.len());
        for (m, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mut s = c.to_string();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => s.push_str(&format!(" * {}", params.name(i))),
                    _ => s.push_str(&format!(" * {}^{}", params.name(i), e)),
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    pub fn to_json(&self) -> Value {
        let params = self.params();
        let terms: Vec<Value> = self
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(m, c)| {
                let mut exps = Map::new();
                for (i, &e) in m.exps().iter().enumerate() {
                    if e != 0 {
                        exps.insert(params.name(i).to_string(), json!(e));
                    }
                }
                json!({"coeff": c.to_string(), "exps": exps})
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(params: &Params, v: &Value) -> Result<Poly> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial JSON needs a `terms` array".into()))?;
        let mut raw = Vec::with_capacity(terms.len());
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("term needs a string `coeff`".into()))?;
            let c = parse_rational(coeff)?;
            let mut exps = vec![0i32; params.len()];
            if let Some(obj) = t.get("exps").and_then(Value::as_object) {
                for (name, e) in obj {
                    let i = params
                        .index_of(name)
                        .ok_or_else(|| Error::Parse(format!("unknown parameter `{name}` in polynomial JSON")))?;
                    exps[i] = e.as_i64().ok_or_else(|| Error::Parse("exponent must be an integer".into()))? as i32;
                }
            }
            raw.push((exps, c));
        }
        Poly::from_terms(params, raw).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses an expression over `params`; see [`parse_expr`].
    pub fn parse(params: &Params, s: &str) -> Result<Poly> {
        parse_expr(params, s)
    }
}

/// Names occurring in a polynomial JSON value, with a flag set when some
/// exponent is negative.
pub fn json_names(v: &Value, out: &mut Vec<(String, bool)>) {
    if let Some(terms) = v.get("terms").and_then(Value::as_array) {
        for t in terms {
            if let Some(obj) = t.get("exps").and_then(Value::as_object) {
                for (name, e) in obj {
                    let neg = e.as_i64().map_or(false, |e| e < 0);
                    match out.iter_mut().find(|(n, _)| n == name) {
                        Some(entry) => entry.1 |= neg,
                        None => out.push((name.clone(), neg)),
                    }
                }
            }
        }
    }
}

/// Parses `p/q`, an integer, or a decimal such as `-0.31` or `1.5e-3` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    if let Some((a, b)) = s.split_once('/') {
        let a: Integer = a.trim().parse().map_err(|_| bad())?;
        let b: Integer = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(Rational::from((a, b)));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: Integer = if digits.is_empty() { Integer::new() } else { digits.parse().map_err(|_| bad())? };
    let scale = exp - frac_part.len() as i32;
    let mut q = Rational::from(num);
    if scale >= 0 {
        q *= Integer::from(Integer::u_pow_u(10, scale as u32));
    } else {
        q /= Integer::from(Integer::u_pow_u(10, (-scale) as u32));
    }
    if neg {
        q = -q;
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Name(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s
        .chars()
        .map(|c| match c {
            '\u{2212}' => '-',
            '\u{00b7}' | '\u{22c5}' | '\u{00d7}' => '*',
            _ => c,
        })
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).map_or(false, |d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent marker only when followed by a digit or signed digit
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if let Some(d) = superscript_digit(c) {
            out.push(Tok::Op('^'));
            out.push(Tok::Num(d.to_string()));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in expression")));
        }
    }
    Ok(out)
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '\u{00b2}' => Some(2),
        '\u{00b3}' => Some(3),
        '\u{2074}'..='\u{2079}' => Some(c as u32 - 0x2070),
        _ => None,
    }
}

/// Identifiers appearing in an expression, in order of first appearance.
pub fn expr_names(s: &str) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for t in tokenize(s)? {
        if let Tok::Name(n) = t {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    Ok(names)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    params: &'a Params,
}

/// Parses arithmetic over rationals and the generators of `params`:
/// `+ - * / ^`, parentheses, decimals, implicit products like `4nu` or `2(x+1)`.
/// Division must be exact in the Laurent ring.
pub fn parse_expr(params: &Params, s: &str) -> Result<Poly> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, params };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(v)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Poly> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.div_exact(&d).map_err(|e| Error::Parse(e.to_string()))?;
            } else if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Name(_)) | Some(Tok::Op('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if e >= 0 {
            Ok(base.pow(e as u32))
        } else {
            Ok(base.unit_inverse().map_err(|e| Error::Parse(e.to_string()))?.pow((-e) as u32))
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = if self.eat('-') { true } else { self.eat('+') && false };
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.parse::<i64>().map_err(|_| Error::Parse(format!("exponent `{n}` must be an integer")))?,
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(Error::Parse("unbalanced parenthesis in exponent".into()));
        }
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.params, parse_rational(&n)?))
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                if !is_identifier(&n) {
                    return Err(Error::Parse(format!("invalid name `{n}`")));
                }
                let i = self.params.index_of(&n).ok_or_else(|| Error::Parse(format!("unknown parameter `{n}`")))?;
                Ok(Poly::var_index(self.params, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
