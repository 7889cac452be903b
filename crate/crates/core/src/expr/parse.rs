use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{BinaryOp, CmpOp, Cond, Expr, UnaryOp, Var};

/// Syntax error with the byte offset of the first offending token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(f64),
    X,
    Y,
    Func1(UnaryOp),
    Func2(BinaryOp),
    If,
    Then,
    Else,
    And,
    Or,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Num(v) => return write!(f, "number {v}"),
            Tok::X => "'x'",
            Tok::Y => "'y'",
            Tok::Func1(_) | Tok::Func2(_) => "function name",
            Tok::If => "'if'",
            Tok::Then => "'then'",
            Tok::Else => "'else'",
            Tok::And => "'and'",
            Tok::Or => "'or'",
            Tok::Plus => "'+'",
            Tok::Minus => "'-'",
            Tok::Star => "'*'",
            Tok::Slash => "'/'",
            Tok::Caret => "'^'",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Comma => "','",
            Tok::Lt => "'<'",
            Tok::Le => "'<='",
            Tok::Gt => "'>'",
            Tok::Ge => "'>='",
            Tok::EqEq => "'=='",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        position,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |next: u8| bytes.get(i + 1) == Some(&next);
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'<' if two(b'=') => {
                i += 1;
                Tok::Le
            }
            b'<' => Tok::Lt,
            b'>' if two(b'=') => {
                i += 1;
                Tok::Ge
            }
            b'>' => Tok::Gt,
            b'=' if two(b'=') => {
                i += 1;
                Tok::EqEq
            }
            b'0'..=b'9' | b'.' => {
                i = scan_number(bytes, i)?;
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| err(start, alloc::format!("malformed number '{text}'")))?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = keyword(word)
                    .ok_or_else(|| err(start, alloc::format!("unknown identifier '{word}'")))?;
                out.push((tok, start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(err(start, alloc::format!("unexpected character '{ch}'")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

fn scan_number(bytes: &[u8], mut i: usize) -> Result<usize, ParseError> {
    let start = i;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let int_end = digits(i);
    i = int_end;
    let mut frac_digits = 0;
    if i < bytes.len() && bytes[i] == b'.' {
        let frac_end = digits(i + 1);
        frac_digits = frac_end - (i + 1);
        i = frac_end;
    }
    if int_end == start && frac_digits == 0 {
        return Err(err(start, "malformed number"));
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_end = digits(j);
        if exp_end == j {
            return Err(err(i, "exponent has no digits"));
        }
        i = exp_end;
    }
    Ok(i)
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "x" => Tok::X,
        "y" => Tok::Y,
        "if" => Tok::If,
        "then" => Tok::Then,
        "else" => Tok::Else,
        "and" => Tok::And,
        "or" => Tok::Or,
        "abs" => Tok::Func1(UnaryOp::Abs),
        "sin" => Tok::Func1(UnaryOp::Sin),
        "cos" => Tok::Func1(UnaryOp::Cos),
        "exp" => Tok::Func1(UnaryOp::Exp),
        "log" => Tok::Func1(UnaryOp::Log),
        "sqrt" => Tok::Func1(UnaryOp::Sqrt),
        "sign" => Tok::Func1(UnaryOp::Sign),
        "min" => Tok::Func2(BinaryOp::Min),
        "max" => Tok::Func2(BinaryOp::Max),
        _ => return None,
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

pub(super) fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        Tok::RParen => Err(err(p.offset(), "unbalanced ')'")),
        t => Err(err(p.offset(), alloc::format!("unexpected {t}"))),
    }
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> Tok {
        self.toks.get(self.pos + k).map_or(Tok::Eof, |&(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let t = self.peek();
        let msg = if t == Tok::Eof && what == "')'" {
            "unbalanced '(': expected ')' before end of input".to_string()
        } else {
            alloc::format!("expected {what}, found {t}")
        };
        err(self.offset(), msg)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Tok::If {
            self.bump();
            let c = self.condition()?;
            self.expect(Tok::Then, "'then'")?;
            let t = self.expr()?;
            self.expect(Tok::Else, "'else'")?;
            let e = self.expr()?;
            return Ok(Expr::cond(c, t, e));
        }
        self.sum()
    }

    fn condition(&mut self) -> Result<Cond, ParseError> {
        let mut c = self.conjunction()?;
        while self.peek() == Tok::Or {
            self.bump();
            let r = self.conjunction()?;
            c = Cond::Or(Box::new(c), Box::new(r));
        }
        Ok(c)
    }

    fn conjunction(&mut self) -> Result<Cond, ParseError> {
        let mut c = self.relation()?;
        while self.peek() == Tok::And {
            self.bump();
            let r = self.relation()?;
            c = Cond::And(Box::new(c), Box::new(r));
        }
        Ok(c)
    }

    fn relation(&mut self) -> Result<Cond, ParseError> {
        // "(" may open either a grouped condition or an arithmetic operand.
        if self.peek() == Tok::LParen {
            let save = self.pos;
            self.bump();
            if let Ok(c) = self.condition() {
                if self.peek() == Tok::RParen {
                    self.bump();
                    if !matches!(
                        self.peek(),
                        Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge | Tok::EqEq
                    ) {
                        return Ok(c);
                    }
                }
            }
            self.pos = save;
        }
        let l = self.sum()?;
        let op = match self.peek() {
            t @ (Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge | Tok::EqEq) => t,
            _ => return Err(self.unexpected("comparison operator")),
        };
        self.bump();
        let r = self.sum()?;
        Ok(match op {
            Tok::Lt => Cond::cmp(CmpOp::Lt, l, r),
            Tok::Le => Cond::cmp(CmpOp::Le, l, r),
            Tok::Gt => Cond::cmp(CmpOp::Lt, r, l),
            Tok::Ge => Cond::cmp(CmpOp::Le, r, l),
            _ => Cond::cmp(CmpOp::Eq, l, r),
        })
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(e),
            };
            self.bump();
            let r = self.product()?;
            e = Expr::binary(op, e, r);
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(e),
            };
            self.bump();
            let r = self.unary()?;
            e = Expr::binary(op, e, r);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Tok::Minus {
            if let Tok::Num(v) = self.peek_at(1) {
                if self.peek_at(2) != Tok::Caret {
                    self.bump();
                    self.bump();
                    return Ok(Expr::Const(-v));
                }
            }
            self.bump();
            let e = self.unary()?;
            return Ok(Expr::unary(UnaryOp::Neg, e));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Tok::Caret {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::binary(BinaryOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::X => {
                self.bump();
                Ok(Expr::Var(Var::X))
            }
            Tok::Y => {
                self.bump();
                Ok(Expr::Var(Var::Y))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Func1(op) => {
                self.bump();
                self.expect(Tok::LParen, "'(' after function name")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::unary(op, e))
            }
            Tok::Func2(op) => {
                self.bump();
                self.expect(Tok::LParen, "'(' after function name")?;
                let l = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let r = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::binary(op, l, r))
            }
            Tok::RParen => Err(err(self.offset(), "unbalanced ')'")),
            Tok::If => Err(err(
                self.offset(),
                "a conditional used as an operand must be parenthesized",
            )),
            t => Err(err(self.offset(), alloc::format!("unexpected {t}"))),
        }
    }
}
