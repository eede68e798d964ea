use super::{is_identifier, Atom, Formula, Neg, Pos};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("polarity error at {line}:{col}: {msg}")]
    Polarity { line: usize, col: usize, msg: String },
}

impl ParseError {
    pub fn syntax(at: (usize, usize), msg: impl Into<String>) -> Self {
        ParseError::Syntax { line: at.0, col: at.1, msg: msg.into() }
    }

    fn polarity(at: (usize, usize), msg: impl Into<String>) -> Self {
        ParseError::Polarity { line: at.0, col: at.1, msg: msg.into() }
    }
}

/// A raw s-expression with the 1-based (line, column) of its first token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Sym(String, (usize, usize)),
    List(Vec<Sexp>, (usize, usize)),
}

impl Sexp {
    pub fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Sym(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Sexp::Sym(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    /// The head symbol and the remaining items of a list.
    pub fn as_call(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items, _) => match items.split_first() {
                Some((Sexp::Sym(head, _), rest)) => Some((head.as_str(), rest)),
                _ => None,
            },
            Sexp::Sym(..) => None,
        }
    }

    /// Reads exactly one s-expression from `text`.
    pub fn read(text: &str) -> Result<Sexp, ParseError> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let sexp = read_one(&tokens, &mut pos, end_of(text))?;
        if let Some(tok) = tokens.get(pos) {
            return Err(ParseError::syntax(tok.at, "unexpected trailing input"));
        }
        Ok(sexp)
    }
}

#[derive(Debug)]
struct Token<'a> {
    text: &'a str,
    at: (usize, usize),
}

fn end_of(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn tokenize(text: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let mut tokens = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' | ')' => {
                tokens.push(Token { text: &text[i..i + 1], at: (line, col) });
                chars.next();
                col += 1;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                let at = (line, col);
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token { text: &text[start..end], at });
            }
            other => return Err(ParseError::syntax((line, col), format!("unexpected character `{other}`"))),
        }
    }
    Ok(tokens)
}

fn read_one(tokens: &[Token<'_>], pos: &mut usize, eof: (usize, usize)) -> Result<Sexp, ParseError> {
    let tok = tokens.get(*pos).ok_or_else(|| ParseError::syntax(eof, "unexpected end of input"))?;
    *pos += 1;
    match tok.text {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(ParseError::syntax(eof, "unclosed `(`")),
                    Some(t) if t.text == ")" => {
                        *pos += 1;
                        return Ok(Sexp::List(items, tok.at));
                    }
                    Some(_) => items.push(read_one(tokens, pos, eof)?),
                }
            }
        }
        ")" => Err(ParseError::syntax(tok.at, "unexpected `)`")),
        sym => Ok(Sexp::Sym(sym.to_string(), tok.at)),
    }
}

fn atom_arg(head: &str, args: &[Sexp], at: (usize, usize)) -> Result<Atom, ParseError> {
    match args {
        [Sexp::Sym(name, p)] if is_identifier(name) => Atom::new(name.clone()).map_err(|m| ParseError::syntax(*p, m)),
        _ => Err(ParseError::syntax(at, format!("`{head}` expects one identifier"))),
    }
}

/// Converts an s-expression into a formula, checking operand polarities.
pub fn formula_from_sexp(s: &Sexp) -> Result<Formula, ParseError> {
    let at = s.pos();
    if let Some(sym) = s.as_sym() {
        return match sym {
            "one" => Ok(Pos::One.into()),
            "zero" => Ok(Pos::Zero.into()),
            "bot" => Ok(Neg::Bot.into()),
            "top" => Ok(Neg::Top.into()),
            other => Err(ParseError::syntax(at, format!("unknown formula `{other}`"))),
        };
    }
    let (head, args) = s.as_call().ok_or_else(|| ParseError::syntax(at, "expected a formula"))?;
    let arity = |n: usize| -> Result<(), ParseError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(ParseError::syntax(at, format!("`{head}` expects {n} operand(s), found {}", args.len())))
        }
    };
    let pos_arg = |i: usize| -> Result<Pos, ParseError> {
        match formula_from_sexp(&args[i])? {
            Formula::Pos(p) => Ok(p),
            Formula::Neg(_) => Err(ParseError::polarity(args[i].pos(), format!("`{head}` requires positive operands"))),
        }
    };
    let neg_arg = |i: usize| -> Result<Neg, ParseError> {
        match formula_from_sexp(&args[i])? {
            Formula::Neg(n) => Ok(n),
            Formula::Pos(_) => Err(ParseError::polarity(args[i].pos(), format!("`{head}` requires negative operands"))),
        }
    };
    let f: Formula = match head {
        "atom" => Pos::Atom(atom_arg(head, args, at)?).into(),
        "natom" => Neg::NAtom(atom_arg(head, args, at)?).into(),
        "tensor" => {
            arity(2)?;
            Pos::tensor(pos_arg(0)?, pos_arg(1)?).into()
        }
        "plus" => {
            arity(2)?;
            Pos::plus(pos_arg(0)?, pos_arg(1)?).into()
        }
        "par" => {
            arity(2)?;
            Neg::par(neg_arg(0)?, neg_arg(1)?).into()
        }
        "with" => {
            arity(2)?;
            Neg::with(neg_arg(0)?, neg_arg(1)?).into()
        }
        "bang" => {
            arity(1)?;
            Pos::bang(neg_arg(0)?).into()
        }
        "up" => {
            arity(1)?;
            Pos::up(neg_arg(0)?).into()
        }
        "quest" => {
            arity(1)?;
            Neg::quest(pos_arg(0)?).into()
        }
        "down" => {
            arity(1)?;
            Neg::down(pos_arg(0)?).into()
        }
        other => return Err(ParseError::syntax(at, format!("unknown connective `{other}`"))),
    };
    Ok(f)
}

pub fn pos_from_sexp(s: &Sexp) -> Result<Pos, ParseError> {
    match formula_from_sexp(s)? {
        Formula::Pos(p) => Ok(p),
        Formula::Neg(_) => Err(ParseError::polarity(s.pos(), "expected a positive formula")),
    }
}

pub fn neg_from_sexp(s: &Sexp) -> Result<Neg, ParseError> {
    match formula_from_sexp(s)? {
        Formula::Neg(n) => Ok(n),
        Formula::Pos(_) => Err(ParseError::polarity(s.pos(), "expected a negative formula")),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    formula_from_sexp(&Sexp::read(text)?)
}

pub fn parse_pos(text: &str) -> Result<Pos, ParseError> {
    pos_from_sexp(&Sexp::read(text)?)
}

pub fn parse_neg(text: &str) -> Result<Neg, ParseError> {
    neg_from_sexp(&Sexp::read(text)?)
}

/// Canonical fully parenthesized rendering.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}
