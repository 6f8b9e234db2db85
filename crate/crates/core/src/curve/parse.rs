//! Parser for the line-oriented curve-spec format.
//!
//! ```text
//! # comment
//! epsilon=1
//! branch rotate=-30deg: 1*t^(3/2) + -0.25*t^2
//! branch rotate=0.5rad: 0
//! ```
//!
//! One branch per line. A term is `<coeff>*t^<integer>` or
//! `<coeff>*t^(<p>/<q>)`; coefficients accept decimals, scientific notation
//! and `p/q` fractions; the literal `0` denotes the zero graph function.
//! Angles require an explicit `deg` or `rad` suffix. The optional
//! `epsilon=` header sets the parameter-domain length for all branches
//! (default 1).

use num_rational::Ratio;
use thiserror::Error;

use super::{BranchGerm, CurveError, PlaneCurveGerm, PowerTerm};
use crate::scalar::Real;

/// Parse failure with 1-based source position.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Parses a curve-spec document into a validated curve germ.
pub fn parse_curve_spec<T: Real>(text: &str) -> Result<PlaneCurveGerm<T>, ParseError> {
    let mut epsilon: Option<f64> = None;
    let mut epsilon_line = 0usize;
    // (rotation, terms with raw f64 coefficients, source line)
    let mut protos: Vec<(f64, Vec<(f64, Ratio<i64>)>, usize)> = Vec::new();

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let content = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, line_no);
        cur.skip_ws();
        if cur.try_literal("epsilon") {
            cur.expect_char('=')?;
            let v = cur.parse_number()?;
            cur.expect_end()?;
            epsilon = Some(v);
            epsilon_line = line_no;
        } else {
            protos.push(parse_branch_line(&mut cur)?);
        }
    }

    if protos.is_empty() {
        return Err(ParseError::new(1, 1, "no branch lines found"));
    }
    let eps = epsilon.unwrap_or(1.0);
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(ParseError::new(
            epsilon_line.max(1),
            1,
            format!("epsilon must be positive, got {eps}"),
        ));
    }

    let mut branches = Vec::with_capacity(protos.len());
    let mut lines = Vec::with_capacity(protos.len());
    for (rotation, terms, line_no) in protos {
        let mut checked = Vec::with_capacity(terms.len());
        for (coeff, exponent) in terms {
            checked.push(
                PowerTerm::new(T::of(coeff), exponent)
                    .map_err(|e| ParseError::new(line_no, 1, e.to_string()))?,
            );
        }
        branches.push(
            BranchGerm::new(checked, T::of(rotation), T::of(eps))
                .map_err(|e| ParseError::new(line_no, 1, e.to_string()))?,
        );
        lines.push(line_no);
    }

    PlaneCurveGerm::new(branches).map_err(|e| match e {
        CurveError::IndistinguishableBranches(_, second) => {
            ParseError::new(lines[second], 1, e.to_string())
        }
        other => ParseError::new(lines[0], 1, other.to_string()),
    })
}

fn parse_branch_line(cur: &mut Cursor<'_>) -> Result<(f64, Vec<(f64, Ratio<i64>)>, usize), ParseError> {
    if !cur.try_literal("branch") {
        return Err(cur.error("expected `branch` or `epsilon=`"));
    }
    cur.skip_ws();
    if !cur.try_literal("rotate") {
        return Err(cur.error("expected `rotate=`"));
    }
    cur.expect_char('=')?;
    let value = cur.parse_number()?;
    let rotation = if cur.try_literal("deg") {
        value.to_radians()
    } else if cur.try_literal("rad") {
        value
    } else {
        return Err(cur.error("angle needs a `deg` or `rad` suffix"));
    };
    cur.skip_ws();
    cur.expect_char(':')?;
    cur.skip_ws();

    let mut terms = Vec::new();
    if cur.try_literal("0") && {
        cur.skip_ws();
        cur.at_end()
    } {
        return Ok((rotation, terms, cur.line));
    }
    loop {
        terms.push(parse_term(cur)?);
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        cur.expect_char('+')?;
        cur.skip_ws();
    }
    Ok((rotation, terms, cur.line))
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<(f64, Ratio<i64>), ParseError> {
    let coeff = cur.parse_coefficient()?;
    cur.skip_ws();
    cur.expect_char('*')?;
    cur.skip_ws();
    if !cur.try_literal("t") {
        return Err(cur.error("expected `t`"));
    }
    cur.expect_char('^')?;
    let exponent = if cur.try_char('(') {
        let p = cur.parse_integer()?;
        cur.skip_ws();
        cur.expect_char('/')?;
        let q = cur.parse_integer()?;
        cur.skip_ws();
        cur.expect_char(')')?;
        if q == 0 {
            return Err(cur.error("exponent denominator is zero"));
        }
        Ratio::new(p, q)
    } else {
        Ratio::from_integer(cur.parse_integer()?)
    };
    Ok((coeff, exponent))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str, line: usize) -> Self {
        Self {
            bytes: s.as_bytes(),
            pos: 0,
            line,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.pos + 1, message)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn try_char(&mut self, c: char) -> bool {
        if self.peek() == Some(c as u8) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_char(&mut self, c: char) -> Result<(), ParseError> {
        if self.try_char(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn try_literal(&mut self, lit: &str) -> bool {
        if self.bytes[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    /// Decimal or scientific float token.
    fn parse_number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let mut saw_digit = false;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
            saw_digit = true;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
                saw_digit = true;
            }
        }
        if saw_digit && matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(b'0'..=b'9')) {
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        if !saw_digit {
            return Err(ParseError::new(self.line, start + 1, "expected a number"));
        }
        let token = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        token
            .parse::<f64>()
            .map_err(|_| ParseError::new(self.line, start + 1, format!("invalid number `{token}`")))
    }

    fn parse_integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ParseError::new(self.line, start + 1, "expected an integer"));
        }
        let token = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        token.parse::<i64>().map_err(|_| {
            ParseError::new(self.line, start + 1, format!("integer out of range `{token}`"))
        })
    }

    /// A coefficient: a number, optionally followed by `/ <number>`.
    fn parse_coefficient(&mut self) -> Result<f64, ParseError> {
        let numer = self.parse_number()?;
        // lookahead: `/` starts a fraction only if not part of `*t^` syntax
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let denom = self.parse_number()?;
            if denom == 0.0 {
                return Err(self.error("coefficient denominator is zero"));
            }
            Ok(numer / denom)
        } else {
            Ok(numer)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_6;

    #[test]
    fn parses_single_power_branch() {
        let curve: PlaneCurveGerm<f64> = parse_curve_spec("branch rotate=0deg: 1*t^(3/2)").unwrap();
        assert_eq!(curve.branch_count(), 1);
        let b = curve.branch(0);
        assert_eq!(b.rotation(), 0.0);
        assert_eq!(b.terms().len(), 1);
        assert_eq!(b.terms()[0].coeff, 1.0);
        assert_eq!(b.terms()[0].exponent, Ratio::new(3, 2));
        assert_eq!(b.domain_length(), 1.0);
    }

    #[test]
    fn parses_zero_branch_as_half_line() {
        let curve: PlaneCurveGerm<f64> = parse_curve_spec("branch rotate=0deg: 0").unwrap();
        assert!(curve.branch(0).is_zero_function());
        let p = curve.branch(0).eval(0.5).unwrap();
        assert_eq!((p.x, p.y), (0.5, 0.0));
    }

    #[test]
    fn parses_two_branch_example_fixture() {
        let text = "\
# two superquadratic branches, tangents at ∓30°
branch rotate=-30deg: 1*t^(3/2)
branch rotate=30deg: -1*t^(3/2)
";
        let curve: PlaneCurveGerm<f64> = parse_curve_spec(text).unwrap();
        assert_eq!(curve.branch_count(), 2);
        assert_relative_eq!(
            curve.branch(0).tangent_angle(),
            std::f64::consts::TAU - FRAC_PI_6,
            epsilon = 1e-12
        );
        assert_relative_eq!(curve.branch(1).tangent_angle(), FRAC_PI_6, epsilon = 1e-12);
    }

    #[test]
    fn accepts_epsilon_header_and_fraction_coefficients() {
        let text = "epsilon=0.5\nbranch rotate=0rad: 1/2*t^(5/4) + 2e-1*t^3\n";
        let curve: PlaneCurveGerm<f64> = parse_curve_spec(text).unwrap();
        let b = curve.branch(0);
        assert_eq!(b.domain_length(), 0.5);
        assert_eq!(b.terms()[0].coeff, 0.5);
        assert_eq!(b.terms()[1].coeff, 0.2);
        assert_eq!(b.terms()[1].exponent, Ratio::from_integer(3));
    }

    #[test]
    fn reports_syntax_error_position() {
        let err = parse_curve_spec::<f64>("branch rotate=0deg 1*t^2").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 20);
        let err = parse_curve_spec::<f64>("\n\nbranch rotate=0banana: 0").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn rejects_exponent_at_most_one() {
        let err = parse_curve_spec::<f64>("branch rotate=0deg: 1*t^1").unwrap_err();
        assert!(err.message.contains("greater than 1"), "{}", err.message);
        let err = parse_curve_spec::<f64>("branch rotate=0deg: 1*t^(9/9)").unwrap_err();
        assert!(err.message.contains("greater than 1"));
    }

    #[test]
    fn rejects_duplicate_branches_with_line() {
        let text = "branch rotate=10deg: 1*t^2\nbranch rotate=10deg: 1*t^2\n";
        let err = parse_curve_spec::<f64>(text).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("indistinguishable"));
    }

    #[test]
    fn rejects_nonpositive_epsilon() {
        let err = parse_curve_spec::<f64>("epsilon=0\nbranch rotate=0deg: 0").unwrap_err();
        assert!(err.message.contains("epsilon"));
    }

    #[test]
    fn exponent_reduces_to_lowest_terms() {
        let curve: PlaneCurveGerm<f64> = parse_curve_spec("branch rotate=0deg: 1*t^(6/4)").unwrap();
        assert_eq!(curve.branch(0).terms()[0].exponent, Ratio::new(3, 2));
    }
}
