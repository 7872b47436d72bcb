//! Text and JSON forms of [`Ket`].
//!
//! The text grammar is a small recursive-descent language over tokens:
//!
//! ```text
//! expr    := sum
//! sum     := sign* product (("+" | "-") product)*
//! product := factor (("*")? factor | "/" factor)*
//! factor  := atom "i"?
//! atom    := number | "i" | "sqrt" "(" sum ")" | "(" sum ")" | ket
//! ket     := "|" [01]+ (">" | "⟩")
//! ```
//!
//! Juxtaposition multiplies, so `1/sqrt(2)|00>` and `(|00> + |11>)/sqrt(2)`
//! both work. A division by a scalar distributes over a parenthesized sum.
//! Whitespace is insignificant.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ket::{Ket, MAX_QUBITS};

/// Output of [`parse_ket_raw`]: the normalized state and the norm of the
/// expression as written.
#[derive(Clone, Debug)]
pub struct ParsedKet {
    pub ket: Ket,
    pub input_norm: f64,
}

pub fn parse_ket(text: &str) -> Result<Ket> {
    parse_ket_raw(text).map(|p| p.ket)
}

fn parse_value(text: &str) -> Result<Value> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let value = parser.sum()?;
    if let Some(tok) = parser.peek() {
        return Err(Error::Syntax {
            pos: tok.pos,
            message: format!("unexpected {}", tok.kind.describe()),
        });
    }
    Ok(value)
}

/// Evaluates a ket-free expression such as `0.5`, `-i/sqrt(2)` or `(1+2i)/3`.
pub fn parse_scalar(text: &str) -> Result<Complex64> {
    match parse_value(text)? {
        Value::Scalar(z) => Ok(z),
        Value::Vector { .. } => Err(Error::Syntax {
            pos: 0,
            message: "expected a number, found a ket".into(),
        }),
    }
}

pub fn parse_ket_raw(text: &str) -> Result<ParsedKet> {
    match parse_value(text)? {
        Value::Scalar(_) => Err(Error::Syntax {
            pos: 0,
            message: "expression contains no ket".into(),
        }),
        Value::Vector { n_qubits, terms } => {
            let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
            for (index, c) in terms {
                amps[index] = c;
            }
            let (ket, input_norm) = Ket::normalized(n_qubits, amps)?;
            Ok(ParsedKet { ket, input_norm })
        }
    }
}

/// Writes `state` as a sum of basis kets, dropping terms with
/// `|amplitude| <= threshold`. Coefficients carry ten decimals with trailing
/// zeros removed; a unit coefficient is omitted.
pub fn format_ket(state: &Ket, threshold: f64) -> String {
    let n = state.n_qubits();
    let mut out = String::new();
    for (index, &amp) in state.amplitudes().iter().enumerate() {
        if amp.norm() <= threshold {
            continue;
        }
        let label = format!("|{:0width$b}>", index, width = n);
        let (negative, coeff) = format_coefficient(amp);
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&coeff);
        out.push_str(&label);
    }
    if out.is_empty() {
        // everything fell below the threshold; keep the result parseable
        out = format!("0|{}>", "0".repeat(n));
    }
    out
}

/// Returns (leading minus, magnitude text). Complex values are parenthesized
/// and never report a leading minus.
fn format_coefficient(z: Complex64) -> (bool, String) {
    let re = trim_decimal(z.re);
    let im = trim_decimal(z.im);
    match (re.as_str(), im.as_str()) {
        (_, "0") => {
            let negative = re.starts_with('-');
            let mag = re.trim_start_matches('-');
            (negative, if mag == "1" { String::new() } else { mag.to_string() })
        }
        ("0", _) => {
            let negative = im.starts_with('-');
            let mag = im.trim_start_matches('-');
            (negative, format!("{mag}i"))
        }
        _ => {
            let sign = if im.starts_with('-') { '-' } else { '+' };
            (false, format!("({re}{sign}{}i)", im.trim_start_matches('-')))
        }
    }
}

fn trim_decimal(x: f64) -> String {
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        other => other.to_string(),
    }
}

pub fn to_json(state: &Ket) -> String {
    serde_json::to_string(state).expect("ket serialization is infallible")
}

pub fn from_json(text: &str) -> Result<Ket> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Number(f64),
    Imag,
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Ket(String),
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(x) => format!("number {x}"),
            TokenKind::Imag => "'i'".into(),
            TokenKind::Sqrt => "'sqrt'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Ket(bits) => format!("ket |{bits}>"),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self,
            TokenKind::Number(_) | TokenKind::Imag | TokenKind::Sqrt | TokenKind::LParen | TokenKind::Ket(_)
        )
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        let single = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '+' => Some(TokenKind::Plus),
            '-' | '−' => Some(TokenKind::Minus),
            '*' | '·' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            _ => None,
        };
        if let Some(kind) = single {
            chars.next();
            tokens.push(Token { kind, pos });
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let mut end = pos;
            let mut seen_exp = false;
            while let Some(&(i, c)) = chars.peek() {
                let exp_sign =
                    seen_exp && (c == '+' || c == '-') && matches!(text[..i].chars().last(), Some('e' | 'E'));
                if c.is_ascii_digit() || c == '.' || exp_sign {
                    end = i + c.len_utf8();
                    chars.next();
                } else if (c == 'e' || c == 'E') && !seen_exp {
                    seen_exp = true;
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            let literal = &text[pos..end];
            let value: f64 = literal.parse().map_err(|_| Error::Syntax {
                pos,
                message: format!("malformed number '{literal}'"),
            })?;
            tokens.push(Token {
                kind: TokenKind::Number(value),
                pos,
            });
            continue;
        }
        if ch == '|' {
            chars.next();
            let mut bits = String::new();
            let mut closed = false;
            while let Some(&(i, c)) = chars.peek() {
                match c {
                    '0' | '1' => {
                        bits.push(c);
                        chars.next();
                    }
                    '>' | '⟩' => {
                        chars.next();
                        closed = true;
                        break;
                    }
                    c if c.is_whitespace() => {
                        chars.next();
                    }
                    other => {
                        return Err(Error::Syntax {
                            pos: i,
                            message: format!("unexpected '{other}' inside ket"),
                        })
                    }
                }
            }
            if !closed {
                return Err(Error::Syntax {
                    pos,
                    message: "unterminated ket".into(),
                });
            }
            if bits.is_empty() {
                return Err(Error::Syntax {
                    pos,
                    message: "empty ket".into(),
                });
            }
            tokens.push(Token {
                kind: TokenKind::Ket(bits),
                pos,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let mut end = pos;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphabetic() {
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[pos..end];
            let kind = match word {
                "i" | "j" => TokenKind::Imag,
                "sqrt" => TokenKind::Sqrt,
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        message: format!("unknown identifier '{word}'"),
                    })
                }
            };
            tokens.push(Token { kind, pos });
            continue;
        }
        if ch == '√' {
            chars.next();
            tokens.push(Token {
                kind: TokenKind::Sqrt,
                pos,
            });
            continue;
        }
        return Err(Error::Syntax {
            pos,
            message: format!("unexpected character '{ch}'"),
        });
    }
    Ok(tokens)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Complex64),
    Vector {
        n_qubits: usize,
        terms: BTreeMap<usize, Complex64>,
    },
}

impl Value {
    fn scale(self, s: Complex64) -> Value {
        match self {
            Value::Scalar(z) => Value::Scalar(z * s),
            Value::Vector { n_qubits, terms } => Value::Vector {
                n_qubits,
                terms: terms.into_iter().map(|(k, v)| (k, v * s)).collect(),
            },
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}", kind.describe())))
        }
    }

    fn error(&self, message: String) -> Error {
        let message = match self.peek() {
            Some(t) => format!("{message}, found {}", t.kind.describe()),
            None => format!("{message}, found end of input"),
        };
        Error::Syntax {
            pos: self.here(),
            message,
        }
    }

    fn sum(&mut self) -> Result<Value> {
        let mut negate = false;
        loop {
            if self.eat(&TokenKind::Minus) {
                negate = !negate;
            } else if !self.eat(&TokenKind::Plus) {
                break;
            }
        }
        let mut acc = self.product()?;
        if negate {
            acc = acc.scale(Complex64::new(-1.0, 0.0));
        }
        loop {
            let pos = self.here();
            let sign = if self.eat(&TokenKind::Plus) {
                1.0
            } else if self.eat(&TokenKind::Minus) {
                -1.0
            } else {
                break;
            };
            let rhs = self.product()?.scale(Complex64::new(sign, 0.0));
            acc = add(acc, rhs, pos)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            let pos = self.here();
            if self.eat(&TokenKind::Slash) {
                let divisor = self.factor()?;
                match divisor {
                    Value::Scalar(d) if d.norm() > 0.0 => acc = acc.scale(d.inv()),
                    Value::Scalar(_) => {
                        return Err(Error::Syntax {
                            pos,
                            message: "division by zero".into(),
                        })
                    }
                    Value::Vector { .. } => {
                        return Err(Error::Syntax {
                            pos,
                            message: "cannot divide by a ket".into(),
                        })
                    }
                }
                continue;
            }
            let explicit = self.eat(&TokenKind::Star);
            match self.peek() {
                Some(t) if t.kind.starts_factor() => {
                    let rhs = self.factor()?;
                    acc = multiply(acc, rhs, pos)?;
                }
                _ if explicit => return Err(self.error("expected a factor after '*'".into())),
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value> {
        let atom = self.atom()?;
        if self.eat(&TokenKind::Imag) {
            Ok(atom.scale(Complex64::i()))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("expected a number, 'sqrt', '(' or a ket".into()));
        };
        match tok.kind {
            TokenKind::Number(x) => {
                self.pos += 1;
                Ok(Value::Scalar(Complex64::new(x, 0.0)))
            }
            TokenKind::Imag => {
                self.pos += 1;
                Ok(Value::Scalar(Complex64::i()))
            }
            TokenKind::Sqrt => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                let arg = self.sum()?;
                self.expect(TokenKind::RParen)?;
                match arg {
                    Value::Scalar(z) if z.im == 0.0 && z.re >= 0.0 => {
                        Ok(Value::Scalar(Complex64::new(z.re.sqrt(), 0.0)))
                    }
                    _ => Err(Error::Syntax {
                        pos: tok.pos,
                        message: "sqrt takes a non-negative real argument".into(),
                    }),
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            TokenKind::Ket(bits) => {
                self.pos += 1;
                let n_qubits = bits.len();
                if n_qubits > MAX_QUBITS {
                    return Err(Error::TooManyQubits {
                        n_qubits,
                        max: MAX_QUBITS,
                    });
                }
                let index = usize::from_str_radix(&bits, 2).expect("tokenizer admits only 0/1");
                let mut terms = BTreeMap::new();
                terms.insert(index, Complex64::new(1.0, 0.0));
                Ok(Value::Vector { n_qubits, terms })
            }
            _ => Err(self.error("expected a number, 'sqrt', '(' or a ket".into())),
        }
    }
}

fn add(a: Value, b: Value, pos: usize) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x + y)),
        (
            Value::Vector { n_qubits, mut terms },
            Value::Vector {
                n_qubits: m,
                terms: other,
            },
        ) => {
            if n_qubits != m {
                return Err(Error::InconsistentQubits {
                    first: n_qubits,
                    second: m,
                });
            }
            for (k, v) in other {
                *terms.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
            Ok(Value::Vector { n_qubits, terms })
        }
        _ => Err(Error::Syntax {
            pos,
            message: "cannot add a scalar and a ket".into(),
        }),
    }
}

fn multiply(a: Value, b: Value, pos: usize) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), other) | (other, Value::Scalar(x)) => Ok(other.scale(x)),
        _ => Err(Error::Syntax {
            pos,
            message: "product of two kets is not supported".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(k: &Ket, i: usize) -> Complex64 {
        k.amplitudes()[i]
    }

    #[test]
    fn ghz_expression() {
        let k = parse_ket("(|0000> + |1111>)/sqrt(2)").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(k.n_qubits(), 4);
        assert!((amp(&k, 0).re - h).abs() < 1e-15);
        assert!((amp(&k, 15).re - h).abs() < 1e-15);
        assert_eq!(k.amplitudes().iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn single_basis_term() {
        let k = parse_ket("|01>").unwrap();
        assert_eq!(k.amplitudes(), &[0.0, 1.0, 0.0, 0.0].map(|x| Complex64::new(x, 0.0)));
    }

    #[test]
    fn qubit_one_is_most_significant() {
        let k = parse_ket("|10>").unwrap();
        assert_eq!(amp(&k, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn s1_expression() {
        let k = parse_ket("(|0000>+|0101>+|1000>+|1110>)/2").unwrap();
        for i in [0, 5, 8, 14] {
            assert!((amp(&k, i).re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn coefficient_forms() {
        let k = parse_ket("1/sqrt(2)|0> - (1/sqrt(2))i|1>").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((amp(&k, 0) - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((amp(&k, 1) - Complex64::new(0.0, -h)).norm() < 1e-15);

        let k = parse_ket("0.5i|0> + 3/4 * |1> + sqrt(3)/4|1>").unwrap();
        assert!(k.norm() > 0.0);

        let k = parse_ket("-|0> + 2*|1>").unwrap();
        let s5 = 5f64.sqrt();
        assert!((amp(&k, 0).re + 1.0 / s5).abs() < 1e-15);
        assert!((amp(&k, 1).re - 2.0 / s5).abs() < 1e-15);
    }

    #[test]
    fn reports_input_norm() {
        let p = parse_ket_raw("|00> + |11>").unwrap();
        assert!((p.input_norm - 2f64.sqrt()).abs() < 1e-15);
        let p = parse_ket_raw("(|00> + |11>)/sqrt(2)").unwrap();
        assert!((p.input_norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_ket("|00> + |1>"),
            Err(Error::InconsistentQubits { first: 2, second: 1 })
        ));
        assert!(matches!(parse_ket("|0> - |0>"), Err(Error::ZeroVector)));
        assert!(matches!(parse_ket("|0> + "), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_ket("|02>"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_ket("0.5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ket("|0>|1>"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ket("|0>/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ket("foo|0>"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_ket("(|0>"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn scalars() {
        let z = parse_scalar("(1+2i)/2").unwrap();
        assert!((z - Complex64::new(0.5, 1.0)).norm() < 1e-15);
        let z = parse_scalar("-i/sqrt(2)").unwrap();
        assert!((z - Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(parse_scalar("0.5|0>").is_err());
        assert!((parse_scalar("0.5 0.5").unwrap().re - 0.25).abs() < 1e-15);
        assert!(parse_scalar("0.5)").is_err());
    }

    #[test]
    fn format_examples() {
        let ghz = parse_ket("(|0000> + |1111>)/sqrt(2)").unwrap();
        assert_eq!(format_ket(&ghz, 1e-12), "0.7071067812|0000> + 0.7071067812|1111>");
        assert_eq!(format_ket(&Ket::basis(4, 0b0110).unwrap(), 1e-12), "|0110>");
        let w = parse_ket("(|0001>+|0010>+|0100>+|1000>)/2").unwrap();
        assert_eq!(format_ket(&w, 1e-12), "0.5|0001> + 0.5|0010> + 0.5|0100> + 0.5|1000>");
        let omega = parse_ket("(|0000>+|0110>+|1001>-|1111>)/2").unwrap();
        assert!(format_ket(&omega, 1e-12).ends_with(" - 0.5|1111>"));
    }

    #[test]
    fn format_complex_round_trip() {
        let k = parse_ket("(0.6|0> + 0.8i|1>)").unwrap();
        let s = format_ket(&k, 0.0);
        assert_eq!(s, "0.6|0> + 0.8i|1>");
        let k = parse_ket("(0.6-0.1i)|0> - 0.3i|1> + 0.2|1>").unwrap();
        let back = parse_ket(&format_ket(&k, 0.0)).unwrap();
        assert!(back.max_abs_diff(&k) < 1e-9);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let k = parse_ket("(0.6-0.1i)|00> - 0.3i|01> + 0.2|11>").unwrap();
        let text = to_json(&k);
        assert!(text.starts_with("{\"n_qubits\":2,\"amplitudes\":[["));
        assert_eq!(from_json(&text).unwrap(), k);
    }

    #[test]
    fn json_rejects_bad_length() {
        assert!(from_json(r#"{"n_qubits":2,"amplitudes":[[1,0],[0,0]]}"#).is_err());
        let k = from_json(r#"{"n_qubits":1,"amplitudes":[[3,0],[4,0]]}"#).unwrap();
        assert!((k.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }
}
