//! Abstract syntax for MiniC.
//!
//! MiniC is a single-translation-unit C subset over word-sized integers:
//! functions, globals, fixed arrays, structs with int fields, and pointers
//! that must be declared with a `restrict` clause naming the array or
//! struct they range over. No char/float/union/goto; those are reserved
//! words that parse to a targeted error.

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct SourceProgram {
    pub globals: Vec<GlobalDecl>,
    pub functions: Vec<Function>,
}

/// Top-level `int g;` or `int a[N];`.
#[derive(Debug, Clone)]
pub struct GlobalDecl {
    pub name: String,
    /// `None` for a scalar, `Some(len)` for an array.
    pub array_len: Option<u32>,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub struct Function {
    pub name: String,
    pub params: Vec<Param>,
    pub body: Block,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub enum Param {
    /// `int x`
    Int { name: String, pos: Pos },
    /// `int *p restrict zone`
    Ptr { name: String, zone: String, pos: Pos },
    /// `int a[] size n` — runtime-sized array, bound given by the sibling
    /// int parameter `n`.
    DynArray {
        name: String,
        size_param: String,
        pos: Pos,
    },
}

impl Param {
    pub fn name(&self) -> &str {
        match self {
            Param::Int { name, .. } | Param::Ptr { name, .. } | Param::DynArray { name, .. } => {
                name
            }
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Param::Int { pos, .. } | Param::Ptr { pos, .. } | Param::DynArray { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Block {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone)]
pub enum Item {
    Decl(LocalDecl),
    Stmt(Stmt),
}

#[derive(Debug, Clone)]
pub enum LocalDecl {
    /// `int x;` or `int x = e;`
    Scalar {
        name: String,
        init: Option<Expr>,
        pos: Pos,
    },
    /// `int a[N];` or `int a[N] = {[lo ... hi] = e,};`
    Array {
        name: String,
        len: u32,
        fill: Option<ArrayFill>,
        pos: Pos,
    },
    /// `struct { int f; ... } x;` or `struct { ... } x[N];`
    Struct {
        name: String,
        fields: Vec<String>,
        len: u32,
        pos: Pos,
    },
    /// `int *p restrict zone;`
    Ptr {
        name: String,
        zone: String,
        pos: Pos,
    },
}

impl LocalDecl {
    pub fn name(&self) -> &str {
        match self {
            LocalDecl::Scalar { name, .. }
            | LocalDecl::Array { name, .. }
            | LocalDecl::Struct { name, .. }
            | LocalDecl::Ptr { name, .. } => name,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            LocalDecl::Scalar { pos, .. }
            | LocalDecl::Array { pos, .. }
            | LocalDecl::Struct { pos, .. }
            | LocalDecl::Ptr { pos, .. } => *pos,
        }
    }
}

/// Range fill initializer `{[lo ... hi] = value,}`.
#[derive(Debug, Clone)]
pub struct ArrayFill {
    pub lo: u32,
    pub hi: u32,
    pub value: Expr,
}

#[derive(Debug, Clone)]
pub enum Stmt {
    Assign {
        target: LValue,
        value: Expr,
        pos: Pos,
    },
    /// `++x;` / `--x;` on a scalar or pointer variable.
    IncDec {
        name: String,
        inc: bool,
        pos: Pos,
    },
    If {
        cond: Expr,
        then_blk: Block,
        else_blk: Option<Block>,
        pos: Pos,
    },
    While {
        cond: Expr,
        body: Block,
        pos: Pos,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        step: Option<Box<Stmt>>,
        body: Block,
        pos: Pos,
    },
    Return {
        value: Expr,
        pos: Pos,
    },
    ExprStmt {
        expr: Expr,
        pos: Pos,
    },
    Block(Block),
}

#[derive(Debug, Clone)]
pub enum LValue {
    /// Scalar or pointer variable.
    Var { name: String, pos: Pos },
    /// `a[i]` / `p[i]`.
    Index {
        base: String,
        index: Expr,
        pos: Pos,
    },
    /// `*p`.
    Deref { name: String, pos: Pos },
    /// `x.f`.
    Field {
        base: String,
        field: String,
        pos: Pos,
    },
    /// `arr[i].f`.
    FieldIndex {
        base: String,
        index: Expr,
        field: String,
        pos: Pos,
    },
}

impl LValue {
    pub fn pos(&self) -> Pos {
        match self {
            LValue::Var { pos, .. }
            | LValue::Index { pos, .. }
            | LValue::Deref { pos, .. }
            | LValue::Field { pos, .. }
            | LValue::FieldIndex { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Xor,
    BitAnd,
    BitOr,
    Lt,
    Le,
    Eq,
    Ne,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Int {
        value: i64,
        pos: Pos,
    },
    Var {
        name: String,
        pos: Pos,
    },
    Index {
        base: String,
        index: Box<Expr>,
        pos: Pos,
    },
    Deref {
        name: String,
        pos: Pos,
    },
    Field {
        base: String,
        field: String,
        pos: Pos,
    },
    FieldIndex {
        base: String,
        index: Box<Expr>,
        field: String,
        pos: Pos,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
        pos: Pos,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        pos: Pos,
    },
    Call {
        name: String,
        args: Vec<Expr>,
        pos: Pos,
    },
    /// `&a` on a zone object (array or struct).
    AddrOf {
        name: String,
        pos: Pos,
    },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int { pos, .. }
            | Expr::Var { pos, .. }
            | Expr::Index { pos, .. }
            | Expr::Deref { pos, .. }
            | Expr::Field { pos, .. }
            | Expr::FieldIndex { pos, .. }
            | Expr::Unary { pos, .. }
            | Expr::Binary { pos, .. }
            | Expr::Call { pos, .. }
            | Expr::AddrOf { pos, .. } => *pos,
        }
    }
}
