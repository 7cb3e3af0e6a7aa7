//! Human form of operators, e.g. `θ^4 - 2q(2θ+1)^2(17θ^2 + 17θ + 5) + 4q^2(θ+1)^2(2θ+1)(2θ+3)`.
//!
//! Each `q`-block is printed as content, rational linear factors and a primitive cofactor.
//! The parser reads the same notation (also `theta` or `\theta`), with products composed left to right.

use std::fmt::Write;

use malachite_base::num::arithmetic::traits::UnsignedAbs;

use crate::ratqa::{Integer, QPoly, Rational};

use super::ore::{ore_mul, OreOperator};
use super::PfError;

const THETA: &str = "θ";
/// Constant and leading coefficients above this are not searched for rational roots.
const ROOT_SEARCH_LIMIT: u64 = 1 << 40;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn small_abs(r: &Rational) -> Option<u64> {
    let n: Integer = r.to_integer()?;
    u64::try_from(&n.unsigned_abs()).ok()
}

/// Split a primitive polynomial into linear factors `(a theta + b)` with multiplicity and a cofactor.
/// `(a, b)` for `a theta + b`, with multiplicity.
type LinearFactor = ((i64, i64), u32);

fn linear_factors(p: &QPoly) -> (Vec<LinearFactor>, QPoly) {
    let mut rest = p.clone();
    let mut out: Vec<LinearFactor> = Vec::new();
    let mut zero = 0u32;
    while rest.degree().unwrap_or(0) > 0 && rest.coeff(0).is_zero() {
        rest = rest.div_exact(&QPoly::x()).unwrap();
        zero += 1;
    }
    if zero > 0 {
        out.push(((1, 0), zero));
    }
    let (Some(c0), Some(cn)) = (small_abs(&rest.coeff(0)), small_abs(&rest.leading())) else {
        return (out, rest);
    };
    if rest.degree().unwrap_or(0) == 0 || c0 > ROOT_SEARCH_LIMIT || cn > ROOT_SEARCH_LIMIT {
        return (out, rest);
    }
    for a in divisors(cn) {
        for b0 in divisors(c0) {
            for b in [b0 as i64, -(b0 as i64)] {
                let (a, b) = (a as i64, b);
                if gcd(a, b.abs()) != 1 {
                    continue;
                }
                let lin = QPoly::from_ints(&[b, a]);
                let mut m = 0;
                while rest.degree().unwrap_or(0) > 0 {
                    match rest.div_exact(&lin) {
                        Some(q) => {
                            rest = q;
                            m += 1;
                        }
                        None => break,
                    }
                }
                if m > 0 {
                    out.push(((a, b), m));
                }
            }
        }
    }
    out.sort();
    (out, rest)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn render_theta_poly(p: &QPoly) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.signum() < 0;
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if k == 0 || !a.is_one() {
            write!(out, "{a}").unwrap();
        }
        match k {
            0 => {}
            1 => out.push_str(THETA),
            _ => write!(out, "{THETA}^{k}").unwrap(),
        }
    }
    out
}

fn render_linear(a: i64, b: i64) -> String {
    let lead = if a == 1 { THETA.to_string() } else { format!("{a}{THETA}") };
    match b.signum() {
        0 => lead,
        1 => format!("({lead}+{b})"),
        _ => format!("({lead}-{})", -b),
    }
}

/// `c q^j Q(theta)` with `c` positive; returns the sign separately.
fn render_block(block: &QPoly, j: usize) -> (bool, String) {
    let mut c = block.content();
    if block.leading().signum() < 0 {
        c = -c;
    }
    let prim = block.scale(&c.recip());
    let (lins, rest) = linear_factors(&prim);
    let mut body = String::new();
    for ((a, b), m) in &lins {
        body.push_str(&render_linear(*a, *b));
        if *m > 1 {
            write!(body, "^{m}").unwrap();
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        write!(body, "({})", render_theta_poly(&rest)).unwrap();
    } else if !rest.coeff(0).is_one() {
        c = &c * &rest.coeff(0);
    }
    let mut s = String::new();
    let ca = c.abs();
    let qpart = match j {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{j}"),
    };
    if !ca.is_one() || (qpart.is_empty() && body.is_empty()) {
        write!(s, "{ca}").unwrap();
    }
    s.push_str(&qpart);
    s.push_str(&body);
    (c.signum() < 0, s)
}

/// The human form of `op`, lowest `q`-power first.
pub fn render(op: &OreOperator) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (j, block) in op.q_major().iter().enumerate() {
        if block.is_zero() {
            continue;
        }
        let (neg, s) = render_block(block, j);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&s);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Integer),
    Q,
    Theta,
    Open,
    Close,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, PfError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let rest: String = chars[i..].iter().take(6).collect();
        match c {
            _ if c.is_whitespace() || c == '{' || c == '}' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Num(digits.parse().map_err(|_| PfError::Parse(digits.clone()))?));
            }
            'q' => {
                out.push(Tok::Q);
                i += 1;
            }
            'θ' => {
                out.push(Tok::Theta);
                i += 1;
            }
            _ if rest.starts_with("theta") => {
                out.push(Tok::Theta);
                i += 5;
            }
            _ if rest.starts_with("\\theta") => {
                out.push(Tok::Theta);
                i += 6;
            }
            '(' | '[' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' | ']' => {
                out.push(Tok::Close);
                i += 1;
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            _ => return Err(PfError::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<OreOperator, PfError> {
        let mut acc = OreOperator::zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
    }

    fn term(&mut self) -> Result<OreOperator, PfError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::Num(_) | Tok::Q | Tok::Theta | Tok::Open) => {}
                _ => return Ok(acc),
            }
            let f = self.power()?;
            acc = ore_mul(&acc, &f);
        }
    }

    fn power(&mut self) -> Result<OreOperator, PfError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let Some(Tok::Num(e)) = self.next() else {
                return Err(PfError::Parse("exponent must be a nonnegative integer".into()));
            };
            let e = u32::try_from(&e).map_err(|_| PfError::Parse("exponent too large".into()))?;
            let mut acc = OreOperator::one();
            for _ in 0..e {
                acc = ore_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<OreOperator, PfError> {
        match self.next() {
            Some(Tok::Num(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let Some(Tok::Num(d)) = self.next() else {
                        return Err(PfError::Parse("expected denominator".into()));
                    };
                    if d == 0 {
                        return Err(PfError::Parse("zero denominator".into()));
                    }
                    return Ok(OreOperator::constant(Rational::from_integers(n, d)));
                }
                Ok(OreOperator::constant(Rational::from_integer(n)))
            }
            Some(Tok::Q) => Ok(OreOperator::q()),
            Some(Tok::Theta) => Ok(OreOperator::theta()),
            Some(Tok::Open) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::Close) {
                    return Err(PfError::Parse("unbalanced parenthesis".into()));
                }
                Ok(e)
            }
            other => Err(PfError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an operator in `q` and `theta`.
pub fn parse_operator(s: &str) -> Result<OreOperator, PfError> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let op = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(PfError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(op)
}

/// Parse a polynomial in `q`.
pub fn parse_qpoly(s: &str) -> Result<QPoly, PfError> {
    let op = parse_operator(s)?;
    if op.order().unwrap_or(0) > 0 {
        return Err(PfError::Parse("expected a polynomial in q".into()));
    }
    Ok(op.coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no4_form_round_trips() {
        let text = "θ^4 - 2q(2θ+1)^2(17θ^2 + 17θ + 5) + 4q^2(θ+1)^2(2θ+1)(2θ+3)";
        let op = parse_operator(text).unwrap();
        assert_eq!(render(&op), text);
        assert_eq!(op.order(), Some(4));
        assert_eq!(op.q_degree(), Some(2));
    }

    #[test]
    fn ascii_and_latex_spellings_agree() {
        let a = parse_operator("theta^2 - 3*q*(theta+1)").unwrap();
        let b = parse_operator("\\theta^{2} - 3 q (\\theta + 1)").unwrap();
        assert_eq!(a, b);
        assert_eq!(render(&a), "θ^2 - 3q(θ+1)");
    }

    #[test]
    fn q_stays_left_of_theta() {
        // theta q = q theta + q
        let a = parse_operator("θ q").unwrap();
        let b = parse_operator("q θ + q").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constants_and_fractions() {
        assert_eq!(render(&parse_operator("-6653952 q^6").unwrap()), "-6653952q^6");
        assert_eq!(render(&parse_operator("1/2 θ").unwrap()), "1/2θ");
        assert_eq!(parse_qpoly("3 - q^2").unwrap(), QPoly::from_ints(&[3, 0, -1]));
        assert!(parse_qpoly("θ").is_err());
        assert!(parse_operator("(θ").is_err());
    }
}
