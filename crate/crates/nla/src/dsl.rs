//! The `.nla` text format: structure equations for a coframe of (1,0)-forms.
//!
//! ```text
//! algebra "example"
//! n = 2
//! d w1 = 0
//! d w2 = w1^c(w1)
//! ```
//!
//! `wK` is the k-th coframe element, `c(wK)` its conjugate, `i` the imaginary
//! unit, `#` starts a line comment. Coefficients are rationals, rational
//! multiples of `i`, or parenthesized sums `(a+bi)`. A wedge factor may be a
//! parenthesized linear combination; the parser distributes it.

use std::fmt;

use thiserror::Error;

use crate::exact::{GaussianRational, Rational};
use crate::forms::{OneForm, TwoForm};

/// A half-open token location in the source text, 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.col_end > self.col_start + 1 {
            write!(
                f,
                "line {}, columns {}-{}",
                self.line,
                self.col_start,
                self.col_end - 1
            )
        } else {
            write!(f, "line {}, column {}", self.line, self.col_start)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: generator index {index} out of range 1..={n}")]
    IndexOutOfRange {
        span: SourceSpan,
        index: usize,
        n: usize,
    },
    #[error("{span}: duplicate equation for w{index}")]
    DuplicateEquation { span: SourceSpan, index: usize },
    #[error("missing equation for w{index}")]
    MissingEquation { index: usize },
}

/// A parsed presentation: `n` and the differentials of `w1..wn`, each fully
/// distributed into canonical two-form coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedPresentation {
    pub name: Option<String>,
    pub n: usize,
    /// `(k, d wK)` sorted by `k`, every index in `1..=n` exactly once.
    pub equations: Vec<(usize, TwoForm)>,
}

impl ParsedPresentation {
    /// Assemble a presentation from the differentials of `w1..wn` in order.
    pub fn from_differentials(name: Option<String>, differentials: Vec<TwoForm>) -> Self {
        let n = differentials.len();
        for d in &differentials {
            assert_eq!(d.n(), n, "differential over wrong coframe size");
        }
        ParsedPresentation {
            name,
            n,
            equations: differentials
                .into_iter()
                .enumerate()
                .map(|(i, d)| (i + 1, d))
                .collect(),
        }
    }

    /// The differential of `wK`, 1-indexed.
    pub fn d_of(&self, k: usize) -> &TwoForm {
        &self.equations[k - 1].1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokKind {
    Word(String),
    Int(String),
    Str(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Equals,
    LParen,
    RParen,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Word(w) => format!("'{w}'"),
            TokKind::Int(d) => format!("'{d}'"),
            TokKind::Str(_) => "string".into(),
            TokKind::Plus => "'+'".into(),
            TokKind::Minus => "'-'".into(),
            TokKind::Star => "'*'".into(),
            TokKind::Slash => "'/'".into(),
            TokKind::Caret => "'^'".into(),
            TokKind::Equals => "'='".into(),
            TokKind::LParen => "'('".into(),
            TokKind::RParen => "')'".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Tok>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut i = 0usize;
    while i < chars.len() {
        let ch = chars[i];
        let start_col = col;
        match ch {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
            }
            '"' => {
                i += 1;
                col += 1;
                let mut s = String::new();
                let mut closed = false;
                while i < chars.len() {
                    let c = chars[i];
                    if c == '\n' {
                        break;
                    }
                    i += 1;
                    col += 1;
                    if c == '"' {
                        closed = true;
                        break;
                    }
                    s.push(c);
                }
                if !closed {
                    return Err(ParseError::Syntax {
                        span: SourceSpan {
                            line,
                            col_start: start_col,
                            col_end: col,
                        },
                        message: "unterminated string".into(),
                    });
                }
                toks.push(Tok {
                    kind: TokKind::Str(s),
                    span: SourceSpan {
                        line,
                        col_start: start_col,
                        col_end: col,
                    },
                });
            }
            c if c.is_ascii_alphabetic() => {
                let mut w = String::new();
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    w.push(chars[i]);
                    i += 1;
                    col += 1;
                }
                toks.push(Tok {
                    kind: TokKind::Word(w),
                    span: SourceSpan {
                        line,
                        col_start: start_col,
                        col_end: col,
                    },
                });
            }
            c if c.is_ascii_digit() => {
                let mut d = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    d.push(chars[i]);
                    i += 1;
                    col += 1;
                }
                toks.push(Tok {
                    kind: TokKind::Int(d),
                    span: SourceSpan {
                        line,
                        col_start: start_col,
                        col_end: col,
                    },
                });
            }
            _ => {
                let kind = match ch {
                    '+' => TokKind::Plus,
                    '-' => TokKind::Minus,
                    '*' => TokKind::Star,
                    '/' => TokKind::Slash,
                    '^' => TokKind::Caret,
                    '=' => TokKind::Equals,
                    '(' => TokKind::LParen,
                    ')' => TokKind::RParen,
                    other => {
                        return Err(ParseError::Syntax {
                            span: SourceSpan {
                                line,
                                col_start: start_col,
                                col_end: start_col + 1,
                            },
                            message: format!("unexpected character '{other}'"),
                        })
                    }
                };
                i += 1;
                col += 1;
                toks.push(Tok {
                    kind,
                    span: SourceSpan {
                        line,
                        col_start: start_col,
                        col_end: col,
                    },
                });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    last_span: SourceSpan,
}

impl Parser {
    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn peek2(&self) -> Option<&TokKind> {
        self.toks.get(self.pos + 1).map(|t| &t.kind)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(self.last_span)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if let Some(t) = &t {
            self.last_span = t.span;
        }
        self.pos += 1;
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            span: self.span(),
            message: message.into(),
        }
    }

    fn expect(&mut self, kind: TokKind) -> Result<Tok, ParseError> {
        match self.peek() {
            Some(k) if *k == kind => Ok(self.next().unwrap()),
            Some(k) => Err(self.err_here(format!(
                "expected {}, found {}",
                kind.describe(),
                k.describe()
            ))),
            None => Err(ParseError::Syntax {
                span: self.last_span,
                message: format!("expected {}, found end of input", kind.describe()),
            }),
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<Tok, ParseError> {
        match self.peek() {
            Some(TokKind::Word(w)) if w == word => Ok(self.next().unwrap()),
            Some(k) => Err(self.err_here(format!("expected '{word}', found {}", k.describe()))),
            None => Err(ParseError::Syntax {
                span: self.last_span,
                message: format!("expected '{word}', found end of input"),
            }),
        }
    }

    fn parse_usize(&mut self, what: &str) -> Result<(usize, SourceSpan), ParseError> {
        match self.peek() {
            Some(TokKind::Int(_)) => {
                let tok = self.next().unwrap();
                let TokKind::Int(digits) = tok.kind else {
                    unreachable!()
                };
                let value = digits.parse::<usize>().map_err(|_| ParseError::Syntax {
                    span: tok.span,
                    message: format!("{what} '{digits}' is too large"),
                })?;
                Ok((value, tok.span))
            }
            Some(k) => Err(self.err_here(format!("expected {what}, found {}", k.describe()))),
            None => Err(ParseError::Syntax {
                span: self.last_span,
                message: format!("expected {what}, found end of input"),
            }),
        }
    }

    /// A generator `wK`, lexed as a single word.
    fn parse_gen(&mut self, n: usize) -> Result<(usize, SourceSpan), ParseError> {
        match self.peek() {
            Some(TokKind::Word(w)) if w.starts_with('w') && w[1..].chars().all(|c| c.is_ascii_digit()) && w.len() > 1 => {
                let tok = self.next().unwrap();
                let TokKind::Word(w) = tok.kind else {
                    unreachable!()
                };
                let index = w[1..].parse::<usize>().map_err(|_| ParseError::Syntax {
                    span: tok.span,
                    message: format!("generator index in '{w}' is too large"),
                })?;
                if index == 0 || index > n {
                    return Err(ParseError::IndexOutOfRange {
                        span: tok.span,
                        index,
                        n,
                    });
                }
                Ok((index, tok.span))
            }
            Some(k) => Err(self.err_here(format!("expected generator, found {}", k.describe()))),
            None => Err(ParseError::Syntax {
                span: self.last_span,
                message: "expected generator, found end of input".into(),
            }),
        }
    }

    /// `wK` or `c(wK)` as a 1-form.
    fn parse_atom(&mut self, n: usize) -> Result<OneForm, ParseError> {
        if let Some(TokKind::Word(w)) = self.peek() {
            if w == "c" {
                self.next();
                self.expect(TokKind::LParen)?;
                let (k, _) = self.parse_gen(n)?;
                self.expect(TokKind::RParen)?;
                return Ok(OneForm::omega_bar(n, k));
            }
        }
        let (k, _) = self.parse_gen(n)?;
        Ok(OneForm::omega(n, k))
    }

    /// An unsigned rational literal `INT` or `INT/INT`.
    fn parse_rat(&mut self) -> Result<Rational, ParseError> {
        let num_tok = match self.peek() {
            Some(TokKind::Int(_)) => self.next().unwrap(),
            _ => return Err(self.err_here("expected number")),
        };
        let TokKind::Int(num) = &num_tok.kind else {
            unreachable!()
        };
        let den = if matches!(self.peek(), Some(TokKind::Slash)) {
            self.next();
            match self.peek() {
                Some(TokKind::Int(_)) => {
                    let tok = self.next().unwrap();
                    let TokKind::Int(d) = tok.kind else {
                        unreachable!()
                    };
                    Some((d, tok.span))
                }
                _ => return Err(self.err_here("expected denominator")),
            }
        } else {
            None
        };
        match &den {
            None => Ok(Rational::from_integer_literal(num).expect("lexer produced digits")),
            Some((d, span)) => {
                Rational::from_ratio_literals(num, d).ok_or_else(|| ParseError::Syntax {
                    span: *span,
                    message: "zero denominator in rational literal".into(),
                })
            }
        }
    }

    /// Whether the next token is a `0` that stands for the zero form rather
    /// than a zero coefficient of a following factor.
    fn at_bare_zero(&self) -> bool {
        if !matches!(self.peek(), Some(TokKind::Int(d)) if d == "0") {
            return false;
        }
        !matches!(self.peek2(), Some(TokKind::Slash) | Some(TokKind::Star))
            && !matches!(self.peek2(), Some(TokKind::Word(w)) if w == "i")
    }

    /// Try to parse a scalar coefficient. Returns `None` (with the position
    /// restored) when the tokens here are not a coefficient.
    fn try_parse_coef(&mut self) -> Result<Option<GaussianRational>, ParseError> {
        let save = self.pos;
        match self.parse_coef() {
            Ok(c) => Ok(Some(c)),
            Err(_) => {
                self.pos = save;
                Ok(None)
            }
        }
    }

    /// `rat`, `i`, `rat i`, `rat * i`, or a parenthesized combination with an
    /// optional leading sign on either part.
    fn parse_coef(&mut self) -> Result<GaussianRational, ParseError> {
        match self.peek() {
            Some(TokKind::Word(w)) if w == "i" => {
                self.next();
                Ok(GaussianRational::i())
            }
            Some(TokKind::Int(_)) => {
                let r = self.parse_rat()?;
                Ok(self.attach_imaginary_unit(r))
            }
            Some(TokKind::LParen) => {
                self.next();
                let mut total = self.parse_signed_coef_part()?;
                while matches!(self.peek(), Some(TokKind::Plus) | Some(TokKind::Minus)) {
                    let negate = matches!(self.next().unwrap().kind, TokKind::Minus);
                    let part = self.parse_coef_part()?;
                    total = if negate { &total - &part } else { &total + &part };
                }
                self.expect(TokKind::RParen)?;
                Ok(total)
            }
            _ => Err(self.err_here("expected coefficient")),
        }
    }

    fn parse_signed_coef_part(&mut self) -> Result<GaussianRational, ParseError> {
        let negate = match self.peek() {
            Some(TokKind::Minus) => {
                self.next();
                true
            }
            Some(TokKind::Plus) => {
                self.next();
                false
            }
            _ => false,
        };
        let part = self.parse_coef_part()?;
        Ok(if negate { -&part } else { part })
    }

    fn parse_coef_part(&mut self) -> Result<GaussianRational, ParseError> {
        match self.peek() {
            Some(TokKind::Word(w)) if w == "i" => {
                self.next();
                Ok(GaussianRational::i())
            }
            Some(TokKind::Int(_)) => {
                let r = self.parse_rat()?;
                Ok(self.attach_imaginary_unit(r))
            }
            _ => Err(self.err_here("expected coefficient")),
        }
    }

    /// After an unsigned rational, absorb a directly following `i` or `* i`.
    fn attach_imaginary_unit(&mut self, r: Rational) -> GaussianRational {
        if let Some(TokKind::Word(w)) = self.peek() {
            if w == "i" {
                self.next();
                return GaussianRational::new(Rational::zero(), r);
            }
        }
        if matches!(self.peek(), Some(TokKind::Star)) {
            if let Some(TokKind::Word(w)) = self.peek2() {
                if w == "i" {
                    self.next();
                    self.next();
                    return GaussianRational::new(Rational::zero(), r);
                }
            }
        }
        GaussianRational::from_rational(r)
    }

    /// `atom` or a parenthesized linear combination of atoms.
    fn parse_factor(&mut self, n: usize) -> Result<OneForm, ParseError> {
        if matches!(self.peek(), Some(TokKind::LParen)) {
            self.next();
            let mut total = OneForm::zero(n);
            // A leading lone 0 is allowed, as is a leading sign.
            let mut first = true;
            loop {
                let sign = match self.peek() {
                    Some(TokKind::Plus) => {
                        self.next();
                        false
                    }
                    Some(TokKind::Minus) => {
                        self.next();
                        true
                    }
                    _ if first => false,
                    Some(TokKind::RParen) => break,
                    _ => return Err(self.err_here("expected '+', '-', or ')'")),
                };
                if first && !sign && self.at_bare_zero() {
                    self.next();
                    first = false;
                    continue;
                }
                let latom = self.parse_latom(n)?;
                total = if sign { total.sub(&latom) } else { total.add(&latom) };
                first = false;
            }
            self.expect(TokKind::RParen)?;
            return Ok(total);
        }
        self.parse_atom(n)
    }

    /// `[coef "*"] atom` inside a parenthesized combination.
    fn parse_latom(&mut self, n: usize) -> Result<OneForm, ParseError> {
        let save = self.pos;
        if let Some(coef) = self.try_parse_coef()? {
            if matches!(self.peek(), Some(TokKind::Star)) {
                self.next();
                let atom = self.parse_atom(n)?;
                return Ok(atom.scale(&coef));
            }
            self.pos = save;
        }
        self.parse_atom(n)
    }

    /// `[coef "*"] factor "^" factor`.
    fn parse_term(&mut self, n: usize) -> Result<TwoForm, ParseError> {
        let save = self.pos;
        let coef = if let Some(c) = self.try_parse_coef()? {
            if matches!(self.peek(), Some(TokKind::Star)) {
                self.next();
                Some(c)
            } else {
                self.pos = save;
                None
            }
        } else {
            None
        };
        let left = self.parse_factor(n)?;
        self.expect(TokKind::Caret)?;
        let right = self.parse_factor(n)?;
        let mut w = left.wedge(&right);
        if let Some(c) = coef {
            w = w.scale(&c);
        }
        Ok(w)
    }

    /// `0` or a signed sum of terms; a leading `0` or sign is accepted.
    fn parse_expr(&mut self, n: usize) -> Result<TwoForm, ParseError> {
        let mut total = TwoForm::zero(n);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(TokKind::Plus) => {
                    self.next();
                    false
                }
                Some(TokKind::Minus) => {
                    self.next();
                    true
                }
                _ if first => false,
                _ => break,
            };
            if first && !sign && self.at_bare_zero() {
                self.next();
                first = false;
                continue;
            }
            let term = self.parse_term(n)?;
            total = if sign { total.sub(&term) } else { total.add(&term) };
            first = false;
        }
        Ok(total)
    }
}

/// Parse a `.nla` file into a presentation.
pub fn parse(text: &str) -> Result<ParsedPresentation, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        last_span: SourceSpan {
            line: 1,
            col_start: 1,
            col_end: 1,
        },
    };
    let name = if matches!(p.peek(), Some(TokKind::Word(w)) if w == "algebra") {
        p.next();
        match p.peek() {
            Some(TokKind::Str(_)) => {
                let tok = p.next().unwrap();
                let TokKind::Str(s) = tok.kind else {
                    unreachable!()
                };
                Some(s)
            }
            _ => return Err(p.err_here("expected quoted algebra name")),
        }
    } else {
        None
    };
    p.expect_word("n")?;
    p.expect(TokKind::Equals)?;
    let (n, _) = p.parse_usize("coframe size")?;
    let mut slots: Vec<Option<TwoForm>> = vec![None; n];
    while p.peek().is_some() {
        p.expect_word("d")?;
        let (k, gen_span) = p.parse_gen(n)?;
        p.expect(TokKind::Equals)?;
        let rhs = p.parse_expr(n)?;
        if slots[k - 1].is_some() {
            return Err(ParseError::DuplicateEquation {
                span: gen_span,
                index: k,
            });
        }
        slots[k - 1] = Some(rhs);
    }
    let mut equations = Vec::with_capacity(n);
    for (i, slot) in slots.into_iter().enumerate() {
        match slot {
            Some(d) => equations.push((i + 1, d)),
            None => return Err(ParseError::MissingEquation { index: i + 1 }),
        }
    }
    Ok(ParsedPresentation { name, n, equations })
}

fn basis_name(n: usize, p: usize) -> String {
    if p < n {
        format!("w{}", p + 1)
    } else {
        format!("c(w{})", p - n + 1)
    }
}

fn rat_text(r: &Rational) -> String {
    format!("{r}")
}

/// Coefficient as `(is_negative, unsigned text including the trailing '*')`;
/// a unit coefficient yields empty text.
fn coef_text(c: &GaussianRational) -> (bool, String) {
    let negative = if c.re.is_zero() {
        c.im.is_negative()
    } else {
        c.re.is_negative()
    };
    let c = if negative { -c } else { c.clone() };
    let text = if c.is_one() {
        String::new()
    } else if c.im.is_zero() {
        format!("{}*", rat_text(&c.re))
    } else if c.re.is_zero() {
        if c.im.is_one() {
            "i*".into()
        } else {
            format!("{}i*", rat_text(&c.im))
        }
    } else {
        let im_abs = c.im.abs();
        let im_sign = if c.im.is_negative() { '-' } else { '+' };
        format!("({}{}{}i)*", rat_text(&c.re), im_sign, rat_text(&im_abs))
    };
    (negative, text)
}

fn expr_text(n: usize, form: &TwoForm) -> String {
    if form.is_zero() {
        return "0".into();
    }
    // Terms in colexicographic order of the basis pairs: the order the
    // canonical basis enumerates them when the second factor varies slowest.
    let mut terms: Vec<((usize, usize), GaussianRational)> =
        form.iter().map(|(k, v)| (k, v.clone())).collect();
    terms.sort_by_key(|((p, q), _)| (*q, *p));
    let mut out = String::new();
    for (idx, ((p, q), c)) in terms.iter().enumerate() {
        let (negative, coef) = coef_text(c);
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&coef);
        out.push_str(&basis_name(n, *p));
        out.push('^');
        out.push_str(&basis_name(n, *q));
    }
    out
}

/// Print a presentation in the canonical form: equations in index order,
/// terms in canonical basis order, reduced coefficients.
pub fn print_canonical(p: &ParsedPresentation) -> String {
    let mut out = String::new();
    if let Some(name) = &p.name {
        out.push_str(&format!("algebra \"{name}\"\n"));
    }
    out.push_str(&format!("n = {}\n", p.n));
    for (k, d) in &p.equations {
        out.push_str(&format!("d w{} = {}\n", k, expr_text(p.n, d)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Ambient;
    use crate::forms::flat_omega_bar;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(Rational::from(a), Rational::from(b))
    }

    #[test]
    fn parses_minimal_presentation() {
        let p = parse("n = 2\nd w1 = 0\nd w2 = w1 ^ c(w1)").unwrap();
        assert_eq!(p.n, 2);
        assert!(p.d_of(1).is_zero());
        let d2 = p.d_of(2);
        assert_eq!(d2.coeff(0, flat_omega_bar(2, 1)), g(1, 0));
        assert_eq!(d2.iter().count(), 1);
    }

    #[test]
    fn rejects_out_of_range_index() {
        let err = parse("n = 3\nd w1 = 0\nd w2 = w1^c(w1)\nd w3 = w4 ^ w1").unwrap_err();
        match err {
            ParseError::IndexOutOfRange { span, index, n } => {
                assert_eq!(index, 4);
                assert_eq!(n, 3);
                assert_eq!(span.line, 4);
                assert_eq!(span.col_start, 8);
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn distributes_parenthesized_combination() {
        let text = "n = 5\nd w1 = 0\nd w2 = w1^c(w1)\nd w3 = 0\nd w4 = 0\n\
                    d w5 = (1/2) * w1 ^ (0 - w2 - w3 + 2*w4 + c(w2) + c(w3))";
        let p = parse(text).unwrap();
        let d5 = p.d_of(5);
        let half = GaussianRational::from_ratio(1, 2);
        assert_eq!(d5.coeff(0, 1), -&half);
        assert_eq!(d5.coeff(0, 2), -&half);
        assert_eq!(d5.coeff(0, 3), g(1, 0));
        assert_eq!(d5.coeff(0, flat_omega_bar(5, 2)), half.clone());
        assert_eq!(d5.coeff(0, flat_omega_bar(5, 3)), half);
        assert_eq!(d5.iter().count(), 5);
    }

    #[test]
    fn duplicate_and_missing_equations() {
        let err = parse("n = 2\nd w1 = 0\nd w1 = 0").unwrap_err();
        assert!(matches!(
            err,
            ParseError::DuplicateEquation { index: 1, .. }
        ));
        let err = parse("n = 2\nd w2 = w1^c(w1)").unwrap_err();
        assert_eq!(err, ParseError::MissingEquation { index: 1 });
    }

    #[test]
    fn canonical_term_order_fixture() {
        // d w3 = i*(w2 ^ c(w1)) - i*(w1 ^ c(w2)) must print with the
        // c(w1) term first.
        let n = 3;
        let d3 = OneForm::omega(n, 2)
            .wedge(&OneForm::omega_bar(n, 1))
            .sub(&OneForm::omega(n, 1).wedge(&OneForm::omega_bar(n, 2)))
            .scale(&g(0, 1));
        let p = ParsedPresentation::from_differentials(
            None,
            vec![
                TwoForm::zero(n),
                OneForm::omega(n, 1).wedge(&OneForm::omega_bar(n, 1)),
                d3,
            ],
        );
        let text = print_canonical(&p);
        assert_eq!(
            text,
            "n = 3\nd w1 = 0\nd w2 = w1^c(w1)\nd w3 = i*w2^c(w1) - i*w1^c(w2)\n"
        );
        assert_eq!(parse(&text).unwrap(), p);
    }

    #[test]
    fn coefficients_print_reduced() {
        let p = parse("n = 2\nd w1 = 0\nd w2 = 2/4*w1^c(w1)").unwrap();
        assert_eq!(
            print_canonical(&p),
            "n = 2\nd w1 = 0\nd w2 = 1/2*w1^c(w1)\n"
        );
    }

    #[test]
    fn complex_coefficient_round_trip() {
        let text = "n = 2\nd w1 = 0\nd w2 = (1-2/3i)*w1^c(w1) - w1^w2 + 3i*w2^c(w2)";
        let p = parse(text).unwrap();
        let printed = print_canonical(&p);
        assert_eq!(
            printed,
            "n = 2\nd w1 = 0\nd w2 = -w1^w2 + (1-2/3i)*w1^c(w1) + 3i*w2^c(w2)\n"
        );
        assert_eq!(parse(&printed).unwrap(), p);
    }

    #[test]
    fn name_and_comments() {
        let text = "# header comment\nalgebra \"heisenberg\"\nn = 2\nd w1 = 0 # trivial\nd w2 = w1^c(w1)";
        let p = parse(text).unwrap();
        assert_eq!(p.name.as_deref(), Some("heisenberg"));
        let printed = print_canonical(&p);
        assert!(printed.starts_with("algebra \"heisenberg\"\n"));
        assert_eq!(parse(&printed).unwrap(), p);
    }

    #[test]
    fn unit_coefficient_sums() {
        // (1+1i) is the canonical spelling of 1+i; the parser also accepts
        // (1+i).
        let a = parse("n = 2\nd w1 = 0\nd w2 = (1+1i)*w1^c(w1)").unwrap();
        let b = parse("n = 2\nd w1 = 0\nd w2 = (1+i)*w1^c(w1)").unwrap();
        assert_eq!(a, b);
        assert_eq!(
            print_canonical(&a),
            "n = 2\nd w1 = 0\nd w2 = (1+1i)*w1^c(w1)\n"
        );
    }

    #[test]
    fn whitespace_insensitivity() {
        let a = parse("n=2 d w1=0 d w2=w1^c(w1)").unwrap();
        let b = parse("n = 2\nd w1 = 0\nd w2 = w1 ^ c(w1)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn syntax_error_has_span() {
        let err = parse("n = 2\nd w1 = 0\nd w2 = w1 ^^ c(w1)").unwrap_err();
        match err {
            ParseError::Syntax { span, .. } => {
                assert_eq!(span.line, 3);
                assert_eq!(span.col_start, 12);
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    fn any_coeff() -> impl Strategy<Value = GaussianRational> {
        (-3i64..4, -3i64..4, 1i64..4).prop_map(|(a, b, d)| {
            GaussianRational::new(Rational::new(a, d), Rational::new(b, d))
        })
    }

    fn any_presentation() -> impl Strategy<Value = ParsedPresentation> {
        (1usize..4).prop_flat_map(|n| {
            let pairs = Ambient::TwoForms(n).dim();
            proptest::collection::vec(
                proptest::collection::vec(any_coeff(), pairs),
                n,
            )
            .prop_map(move |rows| {
                ParsedPresentation::from_differentials(
                    None,
                    rows.into_iter()
                        .map(|v| TwoForm::from_coord_vec(n, &v))
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn parse_print_round_trip(p in any_presentation()) {
            let text = print_canonical(&p);
            let back = parse(&text).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn print_parse_is_idempotent(p in any_presentation()) {
            let once = print_canonical(&p);
            let twice = print_canonical(&parse(&once).unwrap());
            prop_assert_eq!(once, twice);
        }
    }
}
