//! MiniC tokenizer with position tracking.

use crate::ast::Pos;
use crate::diag::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    KwInt,
    KwStruct,
    KwRestrict,
    KwSize,
    KwIf,
    KwElse,
    KwWhile,
    KwFor,
    KwReturn,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    Ellipsis,
    Assign,
    EqEq,
    NotEq,
    Lt,
    Le,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Caret,
    Amp,
    Pipe,
    Bang,
    PlusPlus,
    MinusMinus,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(n) => return write!(f, "identifier `{n}`"),
            Tok::Int(v) => return write!(f, "integer `{v}`"),
            Tok::KwInt => "int",
            Tok::KwStruct => "struct",
            Tok::KwRestrict => "restrict",
            Tok::KwSize => "size",
            Tok::KwIf => "if",
            Tok::KwElse => "else",
            Tok::KwWhile => "while",
            Tok::KwFor => "for",
            Tok::KwReturn => "return",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Ellipsis => "...",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::Caret => "^",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Bang => "!",
            Tok::PlusPlus => "++",
            Tok::MinusMinus => "--",
            Tok::Eof => "end of input",
        };
        write!(f, "`{s}`")
    }
}

/// C constructs this language deliberately omits, each with the message the
/// parser reports when it meets one.
const RESERVED: &[(&str, &str)] = &[
    ("char", "char/string types are not supported"),
    ("float", "floating point is not supported"),
    ("double", "floating point is not supported"),
    ("union", "unions are not supported"),
    ("goto", "goto is not supported"),
    ("longjmp", "longjmp/setjmp are not supported"),
    ("setjmp", "longjmp/setjmp are not supported"),
    ("break", "break is not supported; restructure the loop condition"),
    ("continue", "continue is not supported; restructure with if"),
    ("void", "void is not supported; every function returns int"),
    ("short", "only word-sized int is supported"),
    ("long", "only word-sized int is supported"),
    ("unsigned", "only signed word-sized int is supported"),
    ("signed", "only signed word-sized int is supported"),
    ("switch", "switch is not supported"),
    ("do", "do/while is not supported"),
    ("sizeof", "sizeof is not supported"),
    ("static", "storage classes are not supported"),
    ("extern", "separate compilation is not supported"),
];

pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    loop {
        // Skip whitespace and comments.
        loop {
            match chars.peek() {
                Some(c) if c.is_whitespace() => {
                    bump!();
                }
                Some('/') => {
                    let mut ahead = chars.clone();
                    ahead.next();
                    match ahead.peek() {
                        Some('/') => {
                            while let Some(&c) = chars.peek() {
                                if c == '\n' {
                                    break;
                                }
                                bump!();
                            }
                        }
                        Some('*') => {
                            let open = Pos { line, col };
                            bump!();
                            bump!();
                            let mut closed = false;
                            while let Some(c) = bump!() {
                                if c == '*' && chars.peek() == Some(&'/') {
                                    bump!();
                                    closed = true;
                                    break;
                                }
                            }
                            if !closed {
                                return Err(Diagnostic::new(open, "unterminated comment"));
                            }
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
        }

        let pos = Pos { line, col };
        let c = match chars.peek() {
            Some(&c) => c,
            None => {
                out.push(Token { tok: Tok::Eof, pos });
                return Ok(out);
            }
        };

        let tok = if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add((d as u8 - b'0') as i64))
                    .ok_or_else(|| Diagnostic::new(pos, "integer literal out of range"))?;
                bump!();
            }
            Tok::Int(n)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                name.push(d);
                bump!();
            }
            if let Some((_, msg)) = RESERVED.iter().find(|(kw, _)| *kw == name) {
                return Err(Diagnostic::new(pos, format!("`{name}`: {msg}")));
            }
            match name.as_str() {
                "int" => Tok::KwInt,
                "struct" => Tok::KwStruct,
                "restrict" => Tok::KwRestrict,
                "size" => Tok::KwSize,
                "if" => Tok::KwIf,
                "else" => Tok::KwElse,
                "while" => Tok::KwWhile,
                "for" => Tok::KwFor,
                "return" => Tok::KwReturn,
                _ => Tok::Ident(name),
            }
        } else {
            bump!();
            let two = |chars: &mut std::iter::Peekable<std::str::Chars>, want: char| {
                if chars.peek() == Some(&want) {
                    Some(())
                } else {
                    None
                }
            };
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                '.' => {
                    if chars.peek() == Some(&'.') {
                        bump!();
                        if chars.peek() == Some(&'.') {
                            bump!();
                            Tok::Ellipsis
                        } else {
                            return Err(Diagnostic::new(pos, "expected `...`"));
                        }
                    } else {
                        Tok::Dot
                    }
                }
                '=' => {
                    if two(&mut chars, '=').is_some() {
                        bump!();
                        Tok::EqEq
                    } else {
                        Tok::Assign
                    }
                }
                '!' => {
                    if two(&mut chars, '=').is_some() {
                        bump!();
                        Tok::NotEq
                    } else {
                        Tok::Bang
                    }
                }
                '<' => {
                    if two(&mut chars, '=').is_some() {
                        bump!();
                        Tok::Le
                    } else if chars.peek() == Some(&'<') {
                        return Err(Diagnostic::new(pos, "shift operators are not supported"));
                    } else {
                        Tok::Lt
                    }
                }
                '>' => {
                    return Err(Diagnostic::new(
                        pos,
                        "`>`/`>=` are not supported; swap the operands of `<`/`<=`",
                    ))
                }
                '+' => {
                    if two(&mut chars, '+').is_some() {
                        bump!();
                        Tok::PlusPlus
                    } else {
                        Tok::Plus
                    }
                }
                '-' => {
                    if two(&mut chars, '-').is_some() {
                        bump!();
                        Tok::MinusMinus
                    } else {
                        Tok::Minus
                    }
                }
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '%' => Tok::Percent,
                '^' => Tok::Caret,
                '&' => {
                    if chars.peek() == Some(&'&') {
                        return Err(Diagnostic::new(
                            pos,
                            "`&&` is not supported; use `&` on 0/1 values",
                        ));
                    }
                    Tok::Amp
                }
                '|' => {
                    if chars.peek() == Some(&'|') {
                        return Err(Diagnostic::new(
                            pos,
                            "`||` is not supported; use `|` on 0/1 values",
                        ));
                    }
                    Tok::Pipe
                }
                '~' => return Err(Diagnostic::new(pos, "`~` is not supported; use `^` with -1")),
                '?' => return Err(Diagnostic::new(pos, "`?:` is not supported")),
                other => {
                    return Err(Diagnostic::new(pos, format!("unexpected character `{other}`")))
                }
            }
        };
        out.push(Token { tok, pos });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_track_lines_and_columns() {
        let toks = lex("int x;\n  x = 5;\n").unwrap();
        assert_eq!(toks[0].pos, Pos { line: 1, col: 1 });
        assert_eq!(toks[3].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn reserved_constructs_name_the_feature() {
        let err = lex("char c;").unwrap_err();
        assert!(err.message.contains("char"));
        let err = lex("goto L;").unwrap_err();
        assert!(err.message.contains("goto"));
        let err = lex("float f;").unwrap_err();
        assert!(err.message.contains("floating point"));
    }

    #[test]
    fn rejected_operators_have_hints() {
        assert!(lex("a > b").unwrap_err().message.contains("swap"));
        assert!(lex("a && b").unwrap_err().message.contains("&&"));
    }

    #[test]
    fn ellipsis_and_incdec() {
        let toks = lex("{[0 ... 9] = 1,} ++i --j").unwrap();
        assert!(toks.iter().any(|t| t.tok == Tok::Ellipsis));
        assert!(toks.iter().any(|t| t.tok == Tok::PlusPlus));
        assert!(toks.iter().any(|t| t.tok == Tok::MinusMinus));
    }

    #[test]
    fn comments_are_skipped() {
        let toks = lex("int /* hi \n there */ x; // tail\n").unwrap();
        assert_eq!(toks.len(), 4); // int, x, ;, eof
    }
}
