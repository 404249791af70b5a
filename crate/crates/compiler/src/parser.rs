//! Recursive-descent parser for MiniC.

use crate::ast::*;
use crate::diag::Diagnostic;
use crate::lexer::{lex, Tok, Token};

pub fn parse(src: &str) -> Result<SourceProgram, Diagnostic> {
    let toks = lex(src)?;
    Parser { toks, i: 0 }.program()
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.i + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, Diagnostic> {
        let pos = self.pos();
        if *self.peek() == want {
            self.bump();
            Ok(pos)
        } else {
            Err(Diagnostic::new(
                pos,
                format!("expected {want}, found {}", self.peek()),
            ))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(name) => Ok((name, pos)),
            other => Err(Diagnostic::new(pos, format!("expected identifier, found {other}"))),
        }
    }

    fn int_lit(&mut self) -> Result<i64, Diagnostic> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(v) => Ok(v),
            other => Err(Diagnostic::new(pos, format!("expected integer, found {other}"))),
        }
    }

    fn program(&mut self) -> Result<SourceProgram, Diagnostic> {
        let mut globals = Vec::new();
        let mut functions = Vec::new();
        while *self.peek() != Tok::Eof {
            let pos = self.pos();
            self.expect(Tok::KwInt)?;
            let (name, _) = self.ident()?;
            match self.peek() {
                Tok::LParen => functions.push(self.function(name, pos)?),
                Tok::LBracket => {
                    self.bump();
                    let len = self.array_len()?;
                    self.expect(Tok::RBracket)?;
                    self.expect(Tok::Semi)?;
                    globals.push(GlobalDecl {
                        name,
                        array_len: Some(len),
                        pos,
                    });
                }
                Tok::Semi => {
                    self.bump();
                    globals.push(GlobalDecl {
                        name,
                        array_len: None,
                        pos,
                    });
                }
                other => {
                    return Err(Diagnostic::new(
                        self.pos(),
                        format!("expected `(`, `[` or `;` after `{name}`, found {other}"),
                    ))
                }
            }
        }
        Ok(SourceProgram { globals, functions })
    }

    fn array_len(&mut self) -> Result<u32, Diagnostic> {
        let pos = self.pos();
        let v = self.int_lit()?;
        if v < 1 || v > 1 << 20 {
            return Err(Diagnostic::new(pos, format!("array length {v} out of range")));
        }
        Ok(v as u32)
    }

    fn function(&mut self, name: String, pos: Pos) -> Result<Function, Diagnostic> {
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                params.push(self.param()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        let body = self.block()?;
        Ok(Function {
            name,
            params,
            body,
            pos,
        })
    }

    fn param(&mut self) -> Result<Param, Diagnostic> {
        let pos = self.pos();
        self.expect(Tok::KwInt)?;
        if *self.peek() == Tok::Star {
            self.bump();
            let (name, _) = self.ident()?;
            self.expect(Tok::KwRestrict)?;
            let (zone, _) = self.ident()?;
            return Ok(Param::Ptr { name, zone, pos });
        }
        let (name, _) = self.ident()?;
        if *self.peek() == Tok::LBracket {
            self.bump();
            self.expect(Tok::RBracket)?;
            self.expect(Tok::KwSize)?;
            let (size_param, _) = self.ident()?;
            return Ok(Param::DynArray {
                name,
                size_param,
                pos,
            });
        }
        Ok(Param::Int { name, pos })
    }

    fn block(&mut self) -> Result<Block, Diagnostic> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return Err(Diagnostic::new(self.pos(), "unterminated block"));
            }
            items.push(self.item()?);
        }
        self.bump();
        Ok(Block { items })
    }

    fn item(&mut self) -> Result<Item, Diagnostic> {
        match self.peek() {
            Tok::KwInt | Tok::KwStruct => Ok(Item::Decl(self.local_decl()?)),
            _ => Ok(Item::Stmt(self.stmt()?)),
        }
    }

    fn local_decl(&mut self) -> Result<LocalDecl, Diagnostic> {
        let pos = self.pos();
        if *self.peek() == Tok::KwStruct {
            self.bump();
            self.expect(Tok::LBrace)?;
            let mut fields = Vec::new();
            while *self.peek() != Tok::RBrace {
                self.expect(Tok::KwInt)?;
                let (f, fpos) = self.ident()?;
                if fields.contains(&f) {
                    return Err(Diagnostic::new(fpos, format!("duplicate field `{f}`")));
                }
                fields.push(f);
                self.expect(Tok::Semi)?;
            }
            self.bump();
            if fields.is_empty() {
                return Err(Diagnostic::new(pos, "struct needs at least one field"));
            }
            let (name, _) = self.ident()?;
            let len = if *self.peek() == Tok::LBracket {
                self.bump();
                let len = self.array_len()?;
                self.expect(Tok::RBracket)?;
                len
            } else {
                1
            };
            self.expect(Tok::Semi)?;
            return Ok(LocalDecl::Struct {
                name,
                fields,
                len,
                pos,
            });
        }

        self.expect(Tok::KwInt)?;
        if *self.peek() == Tok::Star {
            self.bump();
            let (name, npos) = self.ident()?;
            if *self.peek() != Tok::KwRestrict {
                return Err(Diagnostic::new(
                    npos,
                    format!("pointer `{name}` needs a `restrict <zone>` clause"),
                ));
            }
            self.bump();
            let (zone, _) = self.ident()?;
            self.expect(Tok::Semi)?;
            return Ok(LocalDecl::Ptr { name, zone, pos });
        }

        let (name, _) = self.ident()?;
        if *self.peek() == Tok::LBracket {
            self.bump();
            let len = self.array_len()?;
            self.expect(Tok::RBracket)?;
            let fill = if *self.peek() == Tok::Assign {
                self.bump();
                Some(self.array_fill(len)?)
            } else {
                None
            };
            self.expect(Tok::Semi)?;
            return Ok(LocalDecl::Array {
                name,
                len,
                fill,
                pos,
            });
        }
        let init = if *self.peek() == Tok::Assign {
            self.bump();
            Some(self.expr()?)
        } else {
            None
        };
        self.expect(Tok::Semi)?;
        Ok(LocalDecl::Scalar { name, init, pos })
    }

    /// `{[lo ... hi] = value,}`
    fn array_fill(&mut self, len: u32) -> Result<ArrayFill, Diagnostic> {
        self.expect(Tok::LBrace)?;
        let range_pos = self.expect(Tok::LBracket)?;
        let lo = self.int_lit()?;
        self.expect(Tok::Ellipsis)?;
        let hi = self.int_lit()?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Assign)?;
        let value = self.expr()?;
        if *self.peek() == Tok::Comma {
            self.bump();
        }
        self.expect(Tok::RBrace)?;
        if lo < 0 || hi < lo || hi as u32 >= len {
            return Err(Diagnostic::new(
                range_pos,
                format!("fill range [{lo} ... {hi}] out of bounds for length {len}"),
            ));
        }
        Ok(ArrayFill {
            lo: lo as u32,
            hi: hi as u32,
            value,
        })
    }

    fn stmt(&mut self) -> Result<Stmt, Diagnostic> {
        let pos = self.pos();
        match self.peek() {
            Tok::LBrace => Ok(Stmt::Block(self.block()?)),
            Tok::KwIf => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let then_blk = self.body()?;
                let else_blk = if *self.peek() == Tok::KwElse {
                    self.bump();
                    Some(self.body()?)
                } else {
                    None
                };
                Ok(Stmt::If {
                    cond,
                    then_blk,
                    else_blk,
                    pos,
                })
            }
            Tok::KwWhile => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let body = self.body()?;
                Ok(Stmt::While { cond, body, pos })
            }
            Tok::KwFor => {
                self.bump();
                self.expect(Tok::LParen)?;
                let init = if *self.peek() == Tok::Semi {
                    None
                } else {
                    Some(Box::new(self.simple_stmt()?))
                };
                self.expect(Tok::Semi)?;
                let cond = if *self.peek() == Tok::Semi {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(Tok::Semi)?;
                let step = if *self.peek() == Tok::RParen {
                    None
                } else {
                    Some(Box::new(self.simple_stmt()?))
                };
                self.expect(Tok::RParen)?;
                let body = self.body()?;
                Ok(Stmt::For {
                    init,
                    cond,
                    step,
                    body,
                    pos,
                })
            }
            Tok::KwReturn => {
                self.bump();
                let value = self.expr()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::Return { value, pos })
            }
            _ => {
              let s = self.simple_stmt()?;
                self.expect(Tok::Semi)?;
                Ok(s)
            }
        }
    }

    /// Statement body: a block or a single statement.
    fn body(&mut self) -> Result<Block, Diagnostic> {
        if *self.peek() == Tok::LBrace {
            self.block()
        } else {
            Ok(Block {
                items: vec![Item::Stmt(self.stmt()?)],
            })
        }
    }

    /// Assignment, increment/decrement, or expression statement (no
    /// trailing `;`).
    fn simple_stmt(&mut self) -> Result<Stmt, Diagnostic> {
        let pos = self.pos();
        match self.peek() {
            Tok::PlusPlus | Tok::MinusMinus => {
                let inc = self.bump() == Tok::PlusPlus;
                let (name, _) = self.ident()?;
                Ok(Stmt::IncDec { name, inc, pos })
            }
            _ => {
                let e = self.expr()?;
                if *self.peek() == Tok::Assign {
                    self.bump();
                    let target = expr_to_lvalue(e)?;
                    let value = self.expr()?;
                    Ok(Stmt::Assign { target, value, pos })
                } else {
                    Ok(Stmt::ExprStmt { expr: e, pos })
                }
            }
        }
    }

    // Expression precedence, loosest to tightest:
    //   | ^ & (== !=) (< <=) (+ -) (* / %) unary postfix
    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        self.bitor()
    }

    fn binary_level<F>(&mut self, ops: &[(Tok, BinOp)], next: F) -> Result<Expr, Diagnostic>
    where
        F: Fn(&mut Self) -> Result<Expr, Diagnostic>,
    {
        let mut lhs = next(self)?;
        loop {
            let pos = self.pos();
            let Some((_, op)) = ops.iter().find(|(t, _)| t == self.peek()) else {
                return Ok(lhs);
            };
            let op = *op;
            self.bump();
            let rhs = next(self)?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                pos,
            };
        }
    }

    fn bitor(&mut self) -> Result<Expr, Diagnostic> {
        self.binary_level(&[(Tok::Pipe, BinOp::BitOr)], Self::bitxor)
    }

    fn bitxor(&mut self) -> Result<Expr, Diagnostic> {
        self.binary_level(&[(Tok::Caret, BinOp::Xor)], Self::bitand)
    }

    fn bitand(&mut self) -> Result<Expr, Diagnostic> {
        self.binary_level(&[(Tok::Amp, BinOp::BitAnd)], Self::equality)
    }

    fn equality(&mut self) -> Result<Expr, Diagnostic> {
        self.binary_level(
            &[(Tok::EqEq, BinOp::Eq), (Tok::NotEq, BinOp::Ne)],
            Self::relational,
        )
    }

    fn relational(&mut self) -> Result<Expr, Diagnostic> {
        self.binary_level(&[(Tok::Lt, BinOp::Lt), (Tok::Le, BinOp::Le)], Self::additive)
    }

    fn additive(&mut self) -> Result<Expr, Diagnostic> {
        self.binary_level(
            &[(Tok::Plus, BinOp::Add), (Tok::Minus, BinOp::Sub)],
            Self::multiplicative,
        )
    }

    fn multiplicative(&mut self) -> Result<Expr, Diagnostic> {
        self.binary_level(
            &[
                (Tok::Star, BinOp::Mul),
                (Tok::Slash, BinOp::Div),
                (Tok::Percent, BinOp::Rem),
            ],
            Self::unary,
        )
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let operand = self.unary()?;
                // Fold negated literals so INT_MIN-style constants stay
                // plain literals.
                if let Expr::Int { value, .. } = operand {
                    return Ok(Expr::Int { value: -value, pos });
                }
                Ok(Expr::Unary {
                    op: UnaryOp::Neg,
                    operand: Box::new(operand),
                    pos,
                })
            }
            Tok::Bang => {
                self.bump();
                Ok(Expr::Unary {
                    op: UnaryOp::Not,
                    operand: Box::new(self.unary()?),
                    pos,
                })
            }
            Tok::Star => {
                self.bump();
                let (name, _) = self.ident().map_err(|d| {
                    Diagnostic::new(
                        d.pos,
                        "`*` dereference applies to a pointer variable; use p[i] for offsets",
                    )
                })?;
                Ok(Expr::Deref { name, pos })
            }
            Tok::Amp => {
                self.bump();
                let (name, _) = self.ident()?;
                Ok(Expr::AddrOf { name, pos })
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(value) => Ok(Expr::Int { value, pos }),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match self.peek() {
                Tok::LParen => {
                    self.bump();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            args.push(self.expr()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Call { name, args, pos })
                }
                Tok::LBracket => {
                    self.bump();
                    let index = self.expr()?;
                    self.expect(Tok::RBracket)?;
                    if *self.peek() == Tok::Dot {
                        self.bump();
                        let (field, _) = self.ident()?;
                        Ok(Expr::FieldIndex {
                            base: name,
                            index: Box::new(index),
                            field,
                            pos,
                        })
                    } else {
                        Ok(Expr::Index {
                            base: name,
                            index: Box::new(index),
                            pos,
                        })
                    }
                }
                Tok::Dot => {
                    self.bump();
                    let (field, _) = self.ident()?;
                    Ok(Expr::Field {
                        base: name,
                        field,
                        pos,
                    })
                }
                _ => Ok(Expr::Var { name, pos }),
            },
            other => Err(Diagnostic::new(
                pos,
                format!("expected expression, found {other}"),
            )),
        }
    }
}

fn expr_to_lvalue(e: Expr) -> Result<LValue, Diagnostic> {
    match e {
        Expr::Var { name, pos } => Ok(LValue::Var { name, pos }),
        Expr::Index { base, index, pos } => Ok(LValue::Index {
            base,
            index: *index,
            pos,
        }),
        Expr::Deref { name, pos } => Ok(LValue::Deref { name, pos }),
        Expr::Field { base, field, pos } => Ok(LValue::Field { base, field, pos }),
        Expr::FieldIndex {
            base,
            index,
            field,
            pos,
        } => Ok(LValue::FieldIndex {
            base,
            index: *index,
            field,
            pos,
        }),
        other => Err(Diagnostic::new(other.pos(), "target is not assignable")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ACKERMANN: &str = "
int A(int m, int n) {
    if (m == 0) { return n + 1; }
    if (n == 0) { return A(m - 1, 1); }
    return A(m - 1, A(m, n - 1));
}
";

    #[test]
    fn ackermann_shape() {
        let p = parse(ACKERMANN).unwrap();
        assert_eq!(p.functions.len(), 1);
        let f = &p.functions[0];
        assert_eq!(f.params.len(), 2);
        // Three returns in the body.
        fn count_returns(b: &Block) -> usize {
            b.items
                .iter()
                .map(|it| match it {
                    Item::Stmt(Stmt::Return { .. }) => 1,
                    Item::Stmt(Stmt::If {
                        then_blk, else_blk, ..
                    }) => {
                        count_returns(then_blk)
                            + else_blk.as_ref().map_or(0, count_returns)
                    }
                    Item::Stmt(Stmt::Block(b))
                    | Item::Stmt(Stmt::While { body: b, .. })
                    | Item::Stmt(Stmt::For { body: b, .. }) => count_returns(b),
                    _ => 0,
                })
                .sum()
        }
        assert_eq!(count_returns(&f.body), 3);
    }

    #[test]
    fn trivial_main() {
        let p = parse("int main(){return 0;}").unwrap();
        assert_eq!(p.functions.len(), 1);
        assert_eq!(p.functions[0].name, "main");
    }

    const SIEVE: &str = "
int S(int n) {
    int a[10] = {[0 ... 9] = 1,};
    int i;
    int j;
    if ((10 < n) | (n < 3)) { return 0; }
    for (i = 2; i < n; ++i) {
        if (a[i]) {
            for (j = 2 * i; j < n; j = j + i) { a[j] = 0; }
        }
    }
    for (i = n - 1; 2 < i; --i) {
        if (a[i]) { return i; }
    }
    return 0;
}
";

    #[test]
    fn sieve_has_one_array_three_loops() {
        let p = parse(SIEVE).unwrap();
        let f = &p.functions[0];
        fn walk(b: &Block, arrays: &mut usize, loops: &mut usize) {
            for it in &b.items {
                match it {
                    Item::Decl(LocalDecl::Array { .. }) => *arrays += 1,
                    Item::Stmt(Stmt::For { body, .. }) | Item::Stmt(Stmt::While { body, .. }) => {
                        *loops += 1;
                        walk(body, arrays, loops);
                    }
                    Item::Stmt(Stmt::If {
                        then_blk, else_blk, ..
                    }) => {
                        walk(then_blk, arrays, loops);
                        if let Some(e) = else_blk {
                            walk(e, arrays, loops);
                        }
                    }
                    Item::Stmt(Stmt::Block(b)) => walk(b, arrays, loops),
                    _ => {}
                }
            }
        }
        let (mut arrays, mut loops) = (0, 0);
        walk(&f.body, &mut arrays, &mut loops);
        assert_eq!(arrays, 1);
        assert_eq!(loops, 3);
    }

    #[test]
    fn restrict_required_on_pointers() {
        let err = parse("int main() { int a[4]; int *p; return 0; }").unwrap_err();
        assert!(err.message.contains("restrict"));
    }

    #[test]
    fn struct_and_pointer_declarations() {
        let src = "int main() {
            struct { int a; int b; } x;
            struct { int a; int b; } grid[3];
            int *p restrict x;
            p = &x;
            x.a = 1;
            grid[2].b = 4;
            return p[1] + grid[0].a;
        }";
        parse(src).unwrap();
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("int main() { return 1 + ; }").unwrap_err();
        assert_eq!(err.pos.line, 1);
        assert!(err.pos.col > 0);
    }

    #[test]
    fn dyn_array_param() {
        let p = parse("int sum(int a[] size n, int n) { return a[0]; }").unwrap();
        match &p.functions[0].params[0] {
            Param::DynArray { name, size_param, .. } => {
                assert_eq!(name, "a");
                assert_eq!(size_param, "n");
            }
            other => panic!("unexpected param {other:?}"),
        }
    }
}
