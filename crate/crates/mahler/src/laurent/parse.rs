//! Text format for Laurent polynomials with complex coefficients.
//!
//! Terms are sums of `coeff*x^e*y^e*...` with integer exponents and `i` for
//! the imaginary unit, e.g. `x + x^-1 + y + y^-1 + 4` or `(1+2i)*x^-2*y`.
//! Variables are `x, y, z, w` (up to four) or `x1, x2, ...`. The canonical
//! printer round-trips through the parser.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::{Complex64, LaurentPoly};

use super::SparsePoly;

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            at: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_unsigned_float(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9') | Some(b'.')) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        // exponent part only if it is actually followed by digits
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mut probe = self.pos + 1;
            if matches!(self.bytes.get(probe), Some(b'+') | Some(b'-')) {
                probe += 1;
            }
            if matches!(self.bytes.get(probe), Some(b'0'..=b'9')) {
                self.pos = probe;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match f64::from_str(text) {
            Ok(v) => Ok(v),
            Err(_) => self.err(format!("malformed number `{text}`")),
        }
    }

    fn parse_signed_int(&mut self) -> Result<i32> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an integer exponent");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match i32::from_str(text) {
            Ok(v) => Ok(if neg { -v } else { v }),
            Err(_) => self.err(format!("exponent `{text}` out of range")),
        }
    }

    /// `(re)`, `(re+imi)`, `(imi)`: a parenthesized complex literal.
    fn parse_paren_complex(&mut self) -> Result<Complex64> {
        self.skip_ws();
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let mag = self.parse_unsigned_float()?;
        let first = if neg { -mag } else { mag };
        self.skip_ws();
        if self.eat(b'i') {
            self.skip_ws();
            if self.eat(b')') {
                return Ok(Complex64::new(0.0, first));
            }
            return self.err("expected `)` after imaginary part");
        }
        if self.eat(b')') {
            return Ok(Complex64::new(first, 0.0));
        }
        let im_neg = if self.eat(b'-') {
            true
        } else if self.eat(b'+') {
            false
        } else {
            return self.err("expected `+`, `-`, `i`, or `)` in complex literal");
        };
        self.skip_ws();
        let im_mag = self.parse_unsigned_float()?;
        self.skip_ws();
        if !self.eat(b'i') {
            return self.err("expected `i` after imaginary part");
        }
        self.skip_ws();
        if !self.eat(b')') {
            return self.err("expected `)` closing complex literal");
        }
        Ok(Complex64::new(first, if im_neg { -im_mag } else { im_mag }))
    }

    /// Variable name -> index: x, y, z, w or x1..xn.
    fn parse_var(&mut self) -> Result<usize> {
        let b = self.peek().unwrap();
        self.pos += 1;
        if b == b'x' && matches!(self.peek(), Some(b'0'..=b'9')) {
            let start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
            let k: usize = match text.parse() {
                Ok(k) => k,
                Err(_) => return self.err("variable index out of range"),
            };
            if k == 0 {
                return self.err("variable indices start at 1");
            }
            return Ok(k - 1);
        }
        match b {
            b'x' => Ok(0),
            b'y' => Ok(1),
            b'z' => Ok(2),
            b'w' => Ok(3),
            other => self.err(format!("unknown variable `{}`", other as char)),
        }
    }

    /// One product of factors; returns (coefficient, exponent map).
    fn parse_term(&mut self, exps: &mut Vec<i32>) -> Result<Complex64> {
        let mut coeff = Complex64::new(1.0, 0.0);
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    coeff *= self.parse_paren_complex()?;
                }
                Some(b'i') => {
                    self.pos += 1;
                    coeff *= Complex64::new(0.0, 1.0);
                }
                Some(b'0'..=b'9') | Some(b'.') => {
                    let v = self.parse_unsigned_float()?;
                    // `2i` binds the imaginary unit to the number
                    if self.eat(b'i') {
                        coeff *= Complex64::new(0.0, v);
                    } else {
                        coeff *= v;
                    }
                }
                Some(b'x') | Some(b'y') | Some(b'z') | Some(b'w') => {
                    let var = self.parse_var()?;
                    let e = if self.eat(b'^') { self.parse_signed_int()? } else { 1 };
                    if var >= exps.len() {
                        exps.resize(var + 1, 0);
                    }
                    exps[var] += e;
                }
                _ => return self.err("expected a factor"),
            }
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(coeff)
    }

    fn parse_sum(&mut self) -> Result<Vec<(Vec<i32>, Complex64)>> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut sign = if self.eat(b'-') { -1.0 } else { 1.0 };
        loop {
            let mut exps = Vec::new();
            let coeff = self.parse_term(&mut exps)?;
            terms.push((exps, coeff * sign));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1.0;
                }
                Some(other) => {
                    return self.err(format!("unexpected `{}`", other as char));
                }
            }
        }
        Ok(terms)
    }
}

/// Parse a polynomial, inferring the variable count from the names used.
pub fn parse_poly(s: &str) -> Result<LaurentPoly> {
    parse_poly_impl(s, None)
}

/// Parse with a declared arity; unused trailing variables are allowed.
pub fn parse_poly_with_arity(s: &str, n_vars: usize) -> Result<LaurentPoly> {
    parse_poly_impl(s, Some(n_vars))
}

fn parse_poly_impl(s: &str, arity: Option<usize>) -> Result<LaurentPoly> {
    let mut p = Parser::new(s);
    let raw = p.parse_sum()?;
    let seen = raw.iter().map(|(e, _)| e.len()).max().unwrap_or(0);
    let n = match arity {
        None => seen,
        Some(n) if n >= seen => n,
        Some(n) => {
            return Err(Error::InvalidInput(format!(
                "polynomial uses {seen} variables but {n} were declared"
            )))
        }
    };
    LaurentPoly::from_terms(
        n,
        raw.into_iter().map(|(e, c)| {
            let mut exps = vec![0i16; n];
            for (k, &v) in e.iter().enumerate() {
                exps[k] = v.clamp(i16::MIN as i32, i16::MAX as i32) as i16;
            }
            (exps, c)
        }),
    )
}

/// Parse a bare complex number such as `3`, `-2.5i`, or `6+2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let p = parse_poly(s)?;
    if p.n_vars() != 0 {
        return Err(Error::InvalidInput(format!(
            "`{s}` is not a complex constant"
        )));
    }
    Ok(p.constant_term())
}

pub fn var_name(index: usize, n_vars: usize) -> String {
    if n_vars <= 4 {
        ["x", "y", "z", "w"][index].to_string()
    } else {
        format!("x{}", index + 1)
    }
}

fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e16 {
        format!("{:.0}", v)
    } else {
        format!("{v}")
    }
}

/// (leading sign, magnitude text) for one coefficient.
fn fmt_coeff(c: Complex64) -> (bool, String) {
    if c.im == 0.0 {
        (c.re < 0.0, fmt_f64(c.re.abs()))
    } else if c.re == 0.0 {
        (c.im < 0.0, format!("{}i", fmt_f64(c.im.abs())))
    } else {
        (
            false,
            format!(
                "({}{}{}i)",
                fmt_f64(c.re),
                if c.im < 0.0 { "-" } else { "+" },
                fmt_f64(c.im.abs())
            ),
        )
    }
}

impl fmt::Display for SparsePoly<Complex64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, &coeff) in self.terms() {
            let (neg, mag) = fmt_coeff(coeff);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_unit = mag == "1";
            if !is_unit || exps.iter().all(|&e| e == 0) {
                factors.push(mag);
            }
            for (k, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = var_name(k, self.n_vars());
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_family() {
        let p = parse_poly("x + x^-1 + y + y^-1 + 4").unwrap();
        assert_eq!(p.n_vars(), 2);
        assert_eq!(p.num_terms(), 5);
        assert_eq!(p.constant_term(), Complex64::new(4.0, 0.0));
        assert_eq!(
            p.coefficient(&[-1, 0]),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn parses_complex_coefficients() {
        let p = parse_poly("2i*x - (1.5-2i)*y^-2 + 3").unwrap();
        assert_eq!(p.coefficient(&[1, 0]), Complex64::new(0.0, 2.0));
        assert_eq!(p.coefficient(&[0, -2]), Complex64::new(-1.5, 2.0));
        assert_eq!(parse_complex("6+2i").unwrap(), Complex64::new(6.0, 2.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), Complex64::new(0.0, -2.5));
        assert!(parse_complex("x+1").is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("q^2").is_err());
        assert!(parse_poly("x^y").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn display_round_trips_examples() {
        for s in [
            "x + x^-1 + y + y^-1 + 4",
            "2i*x - (1.5-2i)*y^-2 + 3",
            "-x*y^3 + 0.25",
            "x1*x5^-2 + x3",
        ] {
            let p = parse_poly(s).unwrap();
            let printed = p.to_string();
            let q = parse_poly_with_arity(&printed, p.n_vars()).unwrap();
            assert_eq!(p, q, "`{s}` printed as `{printed}`");
        }
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(
            terms in proptest::collection::vec(
                ((-5i16..=5, -5i16..=5), (-3.0f64..3.0, -3.0f64..3.0)),
                1..6,
            ),
        ) {
            let p = LaurentPoly::from_terms(
                2,
                terms.iter().map(|&((i, j), (re, im))| (vec![i, j], Complex64::new(re, im))),
            ).unwrap();
            let printed = p.to_string();
            let q = parse_poly_with_arity(&printed, 2).unwrap();
            prop_assert_eq!(p, q);
        }
    }
}
