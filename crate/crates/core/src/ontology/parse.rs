//! Line-oriented ontology syntax.
//!
//! ```text
//! PRINCIPLE <id> "<text>"
//! PRIORITY <id> < <id>        | PRIORITY <id> = <id>
//! TBOX <id> (strict|defeasible(<pid>)): <ConceptExpr> (SUBSUMED_BY|EQUIV) <ConceptExpr>
//! RULE <id> (strict|defeasible(<pid>)): lit ["," lit]* (->|=>) lit [ "OR" lit ]
//! UNDERCUT <id> defeasible(<pid>): lit ["," lit]* => ~applicable(<ruleId>)
//! ABOX [~]Pred(ind[,ind])
//! ```
//!
//! In RULE and UNDERCUT lines a term starting with a lowercase letter is a
//! variable, `?name` is a fresh (skolem-generating) head variable and any other
//! identifier names an individual. In ABOX lines every term is an individual.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::{
    AboxAssertion, ConceptExpr, Mode, Ontology, PrincipleDecl, PriorityDecl, PriorityKind,
    RuleDecl, TBoxAxiom,
};
use crate::formula::{Formula, Literal, Term, APPLICABLE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("reference to undeclared principle `{0}`")]
    UndeclaredPrinciple(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("defeasible declaration `{0}` has no principle")]
    MissingPrinciple(String),
    #[error("unsupported concept expression: {0}")]
    UnsupportedShape(String),
    #[error("predicate `{name}` used with arity {first} and {second}")]
    ArityMismatch {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("invalid rule `{id}`: {reason}")]
    InvalidRule { id: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Fresh(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Lt,
    Eq,
    Tilde,
    Arrow,
    DArrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Fresh(s) => format!("`?{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`=>`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError {
        line: lineno,
        column: col,
        kind: ParseErrorKind::Syntax(msg),
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '<' => Some(Tok::Lt),
            '~' => Some(Tok::Tilde),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, col });
            i += 1;
            continue;
        }
        match c {
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Token {
                    tok: Tok::Arrow,
                    col,
                });
                i += 2;
            }
            '=' if chars.get(i + 1) == Some(&'>') => {
                out.push(Token {
                    tok: Tok::DArrow,
                    col,
                });
                i += 2;
            }
            '=' => {
                out.push(Token { tok: Tok::Eq, col });
                i += 1;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(col, "unterminated string".into())),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(err(i + 1, "invalid escape in string".into())),
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Token {
                    tok: Tok::Str(s),
                    col,
                });
            }
            '?' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                if j == start {
                    return Err(err(col, "expected variable name after `?`".into()));
                }
                out.push(Token {
                    tok: Tok::Fresh(chars[start..j].iter().collect()),
                    col,
                });
                i = j;
            }
            c if is_ident_char(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[i..j].iter().collect()),
                    col,
                });
                i = j;
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

const KEYWORDS: &[&str] = &[
    "AND",
    "OR",
    "NOT",
    "EXISTS",
    "FORALL",
    "NOTHING",
    "SUBSUMED_BY",
    "EQUIV",
];

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line: usize, text: &str) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_col: text.chars().count() + 1,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn err_at(&self, col: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: col,
            kind,
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        self.err_at(self.col(), kind)
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.err(ParseErrorKind::Syntax(msg.into()))
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.syntax(format!("expected {wanted}, found {}", t.describe())),
            None => self.syntax(format!("expected {wanted}, found end of line")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// Identifier that is not a concept-expression keyword.
    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if KEYWORDS.contains(&s.as_str()) {
                return Err(self.err(ParseErrorKind::UnsupportedShape(format!(
                    "expected {what}, found keyword `{s}`"
                ))));
            }
        }
        self.ident(what)
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }
}

/// Position of a predicate use, for arity diagnostics.
#[derive(Debug, Clone)]
struct Use {
    name: String,
    arity: Option<usize>,
    line: usize,
    col: usize,
}

#[derive(Debug)]
struct RawTbox {
    id: String,
    mode: Mode,
    lhs: ConceptExpr,
    rhs: ConceptExpr,
    equivalence: bool,
    line: usize,
    col: usize,
}

enum Decl {
    Principle(PrincipleDecl),
    Priority(PriorityDecl),
    Tbox(RawTbox),
    Rule(RuleDecl),
    Undercut(RuleDecl),
    Abox(AboxAssertion),
}

struct Located<T> {
    item: T,
    line: usize,
    col: usize,
    /// Column of the principle reference, if any.
    principle_col: usize,
}

fn parse_mode(c: &mut Cursor, id: &str) -> Result<(Mode, usize), ParseError> {
    let col = c.col();
    let kw = c.ident("`strict` or `defeasible(<principle>)`")?;
    let mode = match kw.as_str() {
        "strict" => (Mode::Strict, col),
        "defeasible" => {
            if !c.eat(&Tok::LParen) {
                return Err(c.err_at(col, ParseErrorKind::MissingPrinciple(id.to_string())));
            }
            let pcol = c.col();
            let p = c.ident("principle id")?;
            c.expect(Tok::RParen)?;
            (Mode::Defeasible(p), pcol)
        }
        other => {
            return Err(c.err_at(
                col,
                ParseErrorKind::Syntax(format!(
                    "expected `strict` or `defeasible(<principle>)`, found `{other}`"
                )),
            ))
        }
    };
    c.expect(Tok::Colon)?;
    Ok(mode)
}

fn parse_concept(c: &mut Cursor) -> Result<ConceptExpr, ParseError> {
    let mut expr = parse_concept_unit(c)?;
    while c.eat_keyword("AND") {
        let rhs = parse_concept_unit(c)?;
        expr = ConceptExpr::and(expr, rhs);
    }
    Ok(expr)
}

fn parse_concept_unit(c: &mut Cursor) -> Result<ConceptExpr, ParseError> {
    let shape = |c: &Cursor, msg: String| c.err(ParseErrorKind::UnsupportedShape(msg));
    if c.eat(&Tok::LParen) {
        let e = parse_concept(c)?;
        c.expect(Tok::RParen)?;
        if c.is_keyword("OR") {
            return Err(shape(
                c,
                "OR is only allowed between atomic concepts".into(),
            ));
        }
        return Ok(e);
    }
    if c.eat_keyword("NOTHING") {
        return Ok(ConceptExpr::Nothing);
    }
    if c.eat_keyword("NOT") {
        if !matches!(c.peek(), Some(Tok::Ident(_))) {
            return Err(shape(c, "NOT may only negate an atomic concept".into()));
        }
        return Ok(ConceptExpr::Not(c.name("atomic concept after NOT")?));
    }
    for (kw, exists) in [("EXISTS", true), ("FORALL", false)] {
        if c.eat_keyword(kw) {
            let role = c.name("role name")?;
            c.expect(Tok::Dot)?;
            if !matches!(c.peek(), Some(Tok::Ident(_))) {
                return Err(shape(
                    c,
                    format!("{kw} restrictions take an atomic filler concept"),
                ));
            }
            let filler = c.name("atomic filler concept")?;
            return Ok(if exists {
                ConceptExpr::Exists { role, filler }
            } else {
                ConceptExpr::Forall { role, filler }
            });
        }
    }
    let name = c.name("concept name")?;
    if c.eat_keyword("OR") {
        if !matches!(c.peek(), Some(Tok::Ident(_))) || c.is_keyword("NOT") {
            return Err(shape(
                c,
                "OR is only allowed between atomic concepts".into(),
            ));
        }
        let other = c.name("atomic concept after OR")?;
        if c.is_keyword("OR") {
            return Err(shape(c, "only binary disjunctions are supported".into()));
        }
        return Ok(ConceptExpr::Or(name, other));
    }
    Ok(ConceptExpr::Atomic(name))
}

#[derive(Clone, Copy, PartialEq)]
enum TermCtx {
    /// Every term is a named individual.
    Ground,
    /// Lowercase identifiers are variables; `?v` allowed when `fresh_ok`.
    Rule { fresh_ok: bool },
}

fn parse_literal(
    c: &mut Cursor,
    ctx: TermCtx,
    fresh: &mut Vec<String>,
    uses: &mut Vec<Use>,
) -> Result<Literal, ParseError> {
    let positive = !c.eat(&Tok::Tilde);
    let col = c.col();
    let pred = c.ident("predicate name")?;
    if pred == APPLICABLE {
        return Err(c.err_at(
            col,
            ParseErrorKind::Syntax(format!(
                "`{APPLICABLE}` is reserved for naming atoms of rules"
            )),
        ));
    }
    c.expect(Tok::LParen)?;
    let mut args = Vec::new();
    loop {
        let tcol = c.col();
        match (c.bump(), ctx) {
            (Some(Tok::Ident(s)), TermCtx::Ground) => args.push(Term::named(s)),
            (Some(Tok::Ident(s)), TermCtx::Rule { .. }) => {
                if s.chars().next().is_some_and(|ch| ch.is_lowercase()) {
                    args.push(Term::Var(s));
                } else {
                    args.push(Term::named(s));
                }
            }
            (Some(Tok::Fresh(s)), TermCtx::Rule { fresh_ok: true }) => {
                if !fresh.contains(&s) {
                    fresh.push(s.clone());
                }
                args.push(Term::Var(s));
            }
            (Some(Tok::Fresh(s)), _) => {
                return Err(c.err_at(
                    tcol,
                    ParseErrorKind::Syntax(format!(
                        "fresh variable `?{s}` is only allowed in rule heads"
                    )),
                ))
            }
            _ => {
                c.pos -= 1;
                return Err(c.unexpected("term"));
            }
        }
        if c.eat(&Tok::Comma) {
            continue;
        }
        c.expect(Tok::RParen)?;
        break;
    }
    if args.len() > 2 {
        return Err(c.err_at(
            col,
            ParseErrorKind::Syntax(format!(
                "`{pred}` has {} arguments; only concepts (1) and roles (2) exist",
                args.len()
            )),
        ));
    }
    uses.push(Use {
        name: pred.clone(),
        arity: Some(args.len()),
        line: c.line,
        col,
    });
    Ok(Literal::new(pred, args, positive))
}

fn parse_body(c: &mut Cursor, uses: &mut Vec<Use>) -> Result<Vec<Literal>, ParseError> {
    let mut body = Vec::new();
    let mut none = Vec::new();
    loop {
        body.push(parse_literal(
            c,
            TermCtx::Rule { fresh_ok: false },
            &mut none,
            uses,
        )?);
        if !c.eat(&Tok::Comma) {
            return Ok(body);
        }
    }
}

fn check_rule_vars(decl: &RuleDecl) -> Result<(), String> {
    let body_vars: BTreeSet<&str> = decl.body.iter().flat_map(|l| l.variables()).collect();
    for v in &decl.fresh {
        if body_vars.contains(v.as_str()) {
            return Err(format!("fresh variable `?{v}` also occurs in the body"));
        }
    }
    for v in decl.head.variables() {
        if !body_vars.contains(v) && !decl.fresh.iter().any(|f| f == v) {
            return Err(format!(
                "head variable `{v}` occurs neither in the body nor as a fresh `?{v}`"
            ));
        }
    }
    Ok(())
}

fn parse_line(
    text: &str,
    lineno: usize,
    uses: &mut Vec<Use>,
) -> Result<Option<Located<Decl>>, ParseError> {
    let toks = lex(text, lineno)?;
    if toks.is_empty() {
        return Ok(None);
    }
    let mut c = Cursor::new(&toks, lineno, text);
    let kw_col = c.col();
    let kw = c.ident("declaration keyword")?;
    let mut principle_col = 0;
    let (item, col) = match kw.as_str() {
        "PRINCIPLE" => {
            let col = c.col();
            let id = c.ident("principle id")?;
            let text = match c.bump() {
                Some(Tok::Str(s)) => s,
                _ => {
                    c.pos -= 1;
                    return Err(c.unexpected("quoted principle text"));
                }
            };
            (Decl::Principle(PrincipleDecl { id, text }), col)
        }
        "PRIORITY" => {
            let col = c.col();
            let p = parse_priority_tokens(&mut c)?;
            (Decl::Priority(p), col)
        }
        "TBOX" => {
            let col = c.col();
            let id = c.ident("axiom id")?;
            let (mode, pcol) = parse_mode(&mut c, &id)?;
            principle_col = pcol;
            let lhs = parse_concept(&mut c)?;
            let equivalence = if c.eat_keyword("SUBSUMED_BY") {
                false
            } else if c.eat_keyword("EQUIV") {
                true
            } else {
                return Err(c.unexpected("`SUBSUMED_BY` or `EQUIV`"));
            };
            let rhs = parse_concept(&mut c)?;
            for e in [&lhs, &rhs] {
                let mut preds = Vec::new();
                e.predicates(&mut preds);
                let bare =
                    matches!(lhs, ConceptExpr::Atomic(_)) && matches!(rhs, ConceptExpr::Atomic(_));
                for (name, arity) in preds {
                    uses.push(Use {
                        name,
                        arity: (!bare).then_some(arity),
                        line: lineno,
                        col,
                    });
                }
            }
            (
                Decl::Tbox(RawTbox {
                    id,
                    mode,
                    lhs,
                    rhs,
                    equivalence,
                    line: lineno,
                    col,
                }),
                col,
            )
        }
        "RULE" | "UNDERCUT" => {
            let undercut = kw == "UNDERCUT";
            let col = c.col();
            let id = c.ident("rule id")?;
            let (mode, pcol) = parse_mode(&mut c, &id)?;
            principle_col = pcol;
            if undercut && mode.is_strict() {
                return Err(c.err_at(
                    pcol,
                    ParseErrorKind::InvalidRule {
                        id,
                        reason: "undercutting rules must be defeasible".into(),
                    },
                ));
            }
            let body = parse_body(&mut c, uses)?;
            let arrow_col = c.col();
            let strict_arrow = match c.bump() {
                Some(Tok::Arrow) => true,
                Some(Tok::DArrow) => false,
                _ => {
                    c.pos -= 1;
                    return Err(c.unexpected("`->` or `=>`"));
                }
            };
            if strict_arrow != mode.is_strict() {
                return Err(c.err_at(
                    arrow_col,
                    ParseErrorKind::InvalidRule {
                        id,
                        reason: format!(
                            "`{}` does not match mode `{mode}`",
                            if strict_arrow { "->" } else { "=>" }
                        ),
                    },
                ));
            }
            let mut fresh = Vec::new();
            let head = if undercut {
                c.expect(Tok::Tilde)?;
                let acol = c.col();
                if c.ident("`applicable`")? != APPLICABLE {
                    return Err(c.err_at(
                        acol,
                        ParseErrorKind::Syntax(format!(
                            "undercutter heads must be `~{APPLICABLE}(<ruleId>)`"
                        )),
                    ));
                }
                c.expect(Tok::LParen)?;
                let target = c.ident("rule id")?;
                c.expect(Tok::RParen)?;
                Formula::applicable(target, false)
            } else {
                let first =
                    parse_literal(&mut c, TermCtx::Rule { fresh_ok: true }, &mut fresh, uses)?;
                if c.eat_keyword("OR") {
                    let second =
                        parse_literal(&mut c, TermCtx::Rule { fresh_ok: true }, &mut fresh, uses)?;
                    Formula::Or(first, second)
                } else {
                    Formula::Lit(first)
                }
            };
            let decl = RuleDecl {
                id,
                mode,
                body,
                head,
                fresh,
            };
            if let Err(reason) = check_rule_vars(&decl) {
                return Err(c.err_at(
                    col,
                    ParseErrorKind::InvalidRule {
                        id: decl.id,
                        reason,
                    },
                ));
            }
            (
                if undercut {
                    Decl::Undercut(decl)
                } else {
                    Decl::Rule(decl)
                },
                col,
            )
        }
        "ABOX" => {
            let col = c.col();
            let mut none = Vec::new();
            let literal = parse_literal(&mut c, TermCtx::Ground, &mut none, uses)?;
            (Decl::Abox(AboxAssertion { literal }), col)
        }
        other => {
            return Err(c.err_at(
                kw_col,
                ParseErrorKind::Syntax(format!("unknown declaration `{other}`")),
            ))
        }
    };
    c.finish()?;
    Ok(Some(Located {
        item,
        line: lineno,
        col,
        principle_col,
    }))
}

fn parse_priority_tokens(c: &mut Cursor) -> Result<PriorityDecl, ParseError> {
    let lower = c.ident("principle id")?;
    let kind = match c.bump() {
        Some(Tok::Lt) => PriorityKind::Less,
        Some(Tok::Eq) => PriorityKind::Equal,
        _ => {
            c.pos -= 1;
            return Err(c.unexpected("`<` or `=`"));
        }
    };
    let higher = c.ident("principle id")?;
    Ok(PriorityDecl {
        lower,
        higher,
        kind,
    })
}

/// Parses and validates a complete ontology document.
pub fn parse_ontology(source: &str) -> Result<Ontology, ParseError> {
    let mut uses = Vec::new();
    let mut decls = Vec::new();
    for (i, line) in source.lines().enumerate() {
        if let Some(d) = parse_line(line, i + 1, &mut uses)? {
            decls.push(d);
        }
    }

    let err = |line, column, kind| ParseError { line, column, kind };

    // Ids.
    let mut principle_ids = BTreeSet::new();
    let mut rule_ids: HashMap<String, bool> = HashMap::new();
    for d in &decls {
        match &d.item {
            Decl::Principle(p) => {
                if !principle_ids.insert(p.id.clone()) {
                    return Err(err(
                        d.line,
                        d.col,
                        ParseErrorKind::DuplicateId(p.id.clone()),
                    ));
                }
            }
            Decl::Tbox(t) => {
                if rule_ids.insert(t.id.clone(), t.mode.is_strict()).is_some() {
                    return Err(err(
                        d.line,
                        d.col,
                        ParseErrorKind::DuplicateId(t.id.clone()),
                    ));
                }
            }
            Decl::Rule(r) | Decl::Undercut(r)
                if rule_ids.insert(r.id.clone(), r.mode.is_strict()).is_some() =>
            {
                return Err(err(
                    d.line,
                    d.col,
                    ParseErrorKind::DuplicateId(r.id.clone()),
                ));
            }
            _ => {}
        }
    }

    // Principle references.
    for d in &decls {
        let mode = match &d.item {
            Decl::Tbox(t) => Some(&t.mode),
            Decl::Rule(r) | Decl::Undercut(r) => Some(&r.mode),
            _ => None,
        };
        if let Some(Mode::Defeasible(p)) = mode {
            if !principle_ids.contains(p) {
                return Err(err(
                    d.line,
                    d.principle_col,
                    ParseErrorKind::UndeclaredPrinciple(p.clone()),
                ));
            }
        }
        if let Decl::Priority(p) = &d.item {
            for id in [&p.lower, &p.higher] {
                if !principle_ids.contains(id) {
                    return Err(err(
                        d.line,
                        d.col,
                        ParseErrorKind::UndeclaredPrinciple(id.clone()),
                    ));
                }
            }
        }
        if let Decl::Undercut(u) = &d.item {
            if let Formula::Applicable { rule, .. } = &u.head {
                if rule_ids.get(rule) == Some(&true) {
                    return Err(err(
                        d.line,
                        d.col,
                        ParseErrorKind::InvalidRule {
                            id: u.id.clone(),
                            reason: format!("strict rule `{rule}` cannot be undercut"),
                        },
                    ));
                }
            }
        }
    }

    // Arities. Bare `A SUBSUMED_BY B` axioms carry no arity evidence of
    // their own and are resolved afterwards.
    let mut arity: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for u in &uses {
        let Some(a) = u.arity else { continue };
        match arity.get(&u.name) {
            Some(&(first, _, _)) if first != a => {
                return Err(err(
                    u.line,
                    u.col,
                    ParseErrorKind::ArityMismatch {
                        name: u.name.clone(),
                        first,
                        second: a,
                    },
                ))
            }
            Some(_) => {}
            None => {
                arity.insert(u.name.clone(), (a, u.line, u.col));
            }
        }
    }
    let bare: Vec<&RawTbox> = decls
        .iter()
        .filter_map(|d| match &d.item {
            Decl::Tbox(t)
                if matches!(t.lhs, ConceptExpr::Atomic(_))
                    && matches!(t.rhs, ConceptExpr::Atomic(_)) =>
            {
                Some(t)
            }
            _ => None,
        })
        .collect();
    let names = |t: &RawTbox| match (&t.lhs, &t.rhs) {
        (ConceptExpr::Atomic(a), ConceptExpr::Atomic(b)) => (a.clone(), b.clone()),
        _ => unreachable!(),
    };
    loop {
        let mut changed = false;
        for t in &bare {
            let (a, b) = names(t);
            match (arity.get(&a).map(|x| x.0), arity.get(&b).map(|x| x.0)) {
                (Some(x), Some(y)) if x != y => {
                    return Err(err(
                        t.line,
                        t.col,
                        ParseErrorKind::ArityMismatch {
                            name: b,
                            first: y,
                            second: x,
                        },
                    ))
                }
                (Some(x), None) => {
                    arity.insert(b, (x, t.line, t.col));
                    changed = true;
                }
                (None, Some(y)) => {
                    arity.insert(a, (y, t.line, t.col));
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }

    let mut onto = Ontology::default();
    for d in decls {
        match d.item {
            Decl::Principle(p) => onto.principles.push(p),
            Decl::Priority(p) => onto.priorities.push(p),
            Decl::Rule(r) => onto.rules.push(r),
            Decl::Undercut(r) => onto.undercuts.push(r),
            Decl::Abox(a) => onto.abox.push(a),
            Decl::Tbox(t) => {
                let role_pair = match (&t.lhs, &t.rhs) {
                    (ConceptExpr::Atomic(a), ConceptExpr::Atomic(b))
                        if arity.get(a).map(|x| x.0) == Some(2) =>
                    {
                        Some((a.clone(), b.clone()))
                    }
                    _ => None,
                };
                let axiom = match role_pair {
                    Some((a, b)) => TBoxAxiom::role(t.id, a, b, t.equivalence, t.mode),
                    None => TBoxAxiom::concept(t.id, t.lhs, t.rhs, t.equivalence, t.mode)
                        .map_err(|m| err(t.line, t.col, ParseErrorKind::UnsupportedShape(m)))?,
                };
                onto.tbox.push(axiom);
            }
        }
    }
    Ok(onto)
}

/// Ground literal such as `~LeaveCar(PS1)`; all terms are individuals.
pub fn parse_ground_literal(text: &str) -> Result<Literal, ParseError> {
    let toks = lex(text, 1)?;
    let mut c = Cursor::new(&toks, 1, text);
    let mut none = Vec::new();
    let mut uses = Vec::new();
    let l = parse_literal(&mut c, TermCtx::Ground, &mut none, &mut uses)?;
    c.finish()?;
    Ok(l)
}

pub fn parse_concept_expr(text: &str) -> Result<ConceptExpr, ParseError> {
    let toks = lex(text, 1)?;
    let mut c = Cursor::new(&toks, 1, text);
    let e = parse_concept(&mut c)?;
    c.finish()?;
    Ok(e)
}

/// `p2<p1` or `a = b`.
pub fn parse_priority(text: &str) -> Result<PriorityDecl, ParseError> {
    let toks = lex(text, 1)?;
    let mut c = Cursor::new(&toks, 1, text);
    let p = parse_priority_tokens(&mut c)?;
    c.finish()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{AxiomForm, AxiomSide};

    fn kind(src: &str) -> ParseErrorKind {
        parse_ontology(src).unwrap_err().kind
    }

    #[test]
    fn defeasible_subsumption() {
        let o = parse_ontology(
            "PRINCIPLE p3 \"People should bear responsibility\"\n\
             TBOX d1 defeasible(p3): Driver SUBSUMED_BY Sober\n",
        )
        .unwrap();
        let a = &o.tbox[0];
        assert_eq!(a.id, "d1");
        assert_eq!(a.form, AxiomForm::Subsumption);
        assert_eq!(a.mode, Mode::Defeasible("p3".into()));
        assert_eq!(a.lhs, AxiomSide::Concept(ConceptExpr::atomic("Driver")));
    }

    #[test]
    fn empty_source() {
        assert_eq!(parse_ontology("").unwrap(), Ontology::default());
        assert_eq!(
            parse_ontology("# only a comment\n\n").unwrap(),
            Ontology::default()
        );
    }

    #[test]
    fn priority_chain_closure() {
        let o = parse_ontology(
            "PRINCIPLE p0 \"a\"\nPRINCIPLE p1 \"b\"\nPRINCIPLE p2 \"c\"\n\
             PRIORITY p2 < p1\nPRIORITY p1 < p0\n",
        )
        .unwrap();
        assert!(o.priority_order().le("p2", "p0"));
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            kind("TBOX a defeasible(p9): A SUBSUMED_BY B"),
            ParseErrorKind::UndeclaredPrinciple(p) if p == "p9"
        ));
        assert!(matches!(
            kind("TBOX a defeasible: A SUBSUMED_BY B"),
            ParseErrorKind::MissingPrinciple(id) if id == "a"
        ));
        assert!(matches!(
            kind("TBOX a strict: A SUBSUMED_BY B\nRULE a strict: A(x) -> B(x)"),
            ParseErrorKind::DuplicateId(id) if id == "a"
        ));
        assert!(matches!(
            kind("PRIORITY a < b"),
            ParseErrorKind::UndeclaredPrinciple(_)
        ));
        assert!(matches!(
            kind("ABOX P(a, b)\nABOX P(a)"),
            ParseErrorKind::ArityMismatch { .. }
        ));
        assert!(matches!(
            kind("RULE r strict: A(x) -> B(y)"),
            ParseErrorKind::InvalidRule { .. }
        ));
        assert!(matches!(
            kind("RULE r strict: A(x) => B(x)"),
            ParseErrorKind::InvalidRule { .. }
        ));
        assert!(matches!(
            kind("RULE r strict: A(x) -> B(x)\nUNDERCUT u defeasible(p): A(x) => ~applicable(r)\nPRINCIPLE p \"t\""),
            ParseErrorKind::InvalidRule { .. }
        ));
        assert!(matches!(kind("FOO bar"), ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_ontology("\nABOX Driver(PS1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 16);
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn rejects_unsupported_shapes() {
        let bad = [
            "TBOX a strict: EXISTS P.(EXISTS Q.D) SUBSUMED_BY C",
            "TBOX a strict: A SUBSUMED_BY EXISTS P.(B AND C)",
            "TBOX a strict: FORALL P.D SUBSUMED_BY C",
            "TBOX a strict: A OR B SUBSUMED_BY C",
            "TBOX a strict: A SUBSUMED_BY B OR C OR D",
            "TBOX a strict: A SUBSUMED_BY NOT (B AND C)",
            "TBOX a strict: A SUBSUMED_BY NOTHING",
            "TBOX a strict: NOTHING SUBSUMED_BY A",
            "TBOX a strict: A AND B EQUIV C",
            "TBOX a strict: A SUBSUMED_BY B AND EXISTS P.C",
            "TBOX a strict: (A AND B) OR C SUBSUMED_BY D",
            "TBOX a strict: A SUBSUMED_BY (B OR C) AND D",
            "TBOX a strict: EXISTS P.C AND D SUBSUMED_BY NOTHING",
        ];
        for src in bad {
            assert!(
                matches!(kind(src), ParseErrorKind::UnsupportedShape(_)),
                "{src} should be rejected as unsupported, got {:?}",
                parse_ontology(src)
            );
        }
    }

    #[test]
    fn role_axioms_resolved_by_arity() {
        let o = parse_ontology(
            "TBOX a strict: hitAndRun SUBSUMED_BY involvedIn\nABOX involvedIn(A, B)\n",
        )
        .unwrap();
        assert_eq!(o.tbox[0].form, AxiomForm::RoleSubsumption);
        assert_eq!(o.tbox[0].lhs, AxiomSide::Role("hitAndRun".into()));
        let o = parse_ontology("TBOX a strict: A EQUIV B\n").unwrap();
        assert_eq!(o.tbox[0].form, AxiomForm::Equivalence);
    }

    #[test]
    fn fresh_and_constants_in_rules() {
        let o =
            parse_ontology("RULE r strict: C(x) -> P(x, ?new)\nRULE s strict: C(x) -> D(Bob)\n")
                .unwrap();
        assert_eq!(o.rules[0].fresh, vec!["new".to_string()]);
        assert_eq!(
            o.rules[1].head,
            Formula::Lit(Literal::pos("D", vec![Term::named("Bob")]))
        );
    }

    #[test]
    fn query_helpers() {
        assert_eq!(
            parse_ground_literal("~LeaveCar(PS1)").unwrap(),
            Literal::ground("LeaveCar", &["PS1"], false)
        );
        assert_eq!(
            parse_concept_expr("Driver AND Intoxicated").unwrap(),
            ConceptExpr::and(
                ConceptExpr::atomic("Driver"),
                ConceptExpr::atomic("Intoxicated")
            )
        );
        let p = parse_priority("p2<p1").unwrap();
        assert_eq!(p, PriorityDecl::less("p2", "p1"));
    }
}
