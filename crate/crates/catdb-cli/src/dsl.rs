//! The textual workspace format: lexer, parser, and raw declarations.
//!
//! Declarations are parsed into location-carrying raw values here and
//! resolved against each other in [`crate::workspace`]. Names are bare
//! identifier runs (`[A-Za-z0-9_]+`) or double-quoted strings with `\"` and
//! `\\` escapes, so generated names (merged columns, key families) survive a
//! round trip. `#` starts a line comment.

use std::fmt;

/// Where something was read from, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}", self.line, self.col)
    }
}

/// How a workspace error should be classified at the process boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Lexical or grammatical: exit code 2 territory.
    Syntax,
    /// A name that never resolves.
    Unresolved,
    /// A well-formed declaration that fails validation.
    Validation,
}

/// A located workspace error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceError {
    pub pos: Pos,
    pub kind: ErrorKind,
    pub message: String,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for SourceError {}

impl SourceError {
    pub fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        SourceError {
            pos,
            kind: ErrorKind::Syntax,
            message: message.into(),
        }
    }

    pub fn unresolved(pos: Pos, message: impl Into<String>) -> Self {
        SourceError {
            pos,
            kind: ErrorKind::Unresolved,
            message: message.into(),
        }
    }

    pub fn validation(pos: Pos, message: impl Into<String>) -> Self {
        SourceError {
            pos,
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Arrow,
    BiArrow,
    Eq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::BiArrow => write!(f, "`<->`"),
            Tok::Eq => write!(f, "`=`"),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SourceError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }
    loop {
        let pos = Pos { line, col };
        let Some(&c) = chars.peek() else { break };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '{' => {
                bump!();
                out.push((Tok::LBrace, pos));
            }
            '}' => {
                bump!();
                out.push((Tok::RBrace, pos));
            }
            '(' => {
                bump!();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                bump!();
                out.push((Tok::RParen, pos));
            }
            ':' => {
                bump!();
                out.push((Tok::Colon, pos));
            }
            ';' => {
                bump!();
                out.push((Tok::Semi, pos));
            }
            ',' => {
                bump!();
                out.push((Tok::Comma, pos));
            }
            '=' => {
                bump!();
                out.push((Tok::Eq, pos));
            }
            '-' => {
                bump!();
                match chars.peek() {
                    Some('>') => {
                        bump!();
                        out.push((Tok::Arrow, pos));
                    }
                    _ => return Err(SourceError::syntax(pos, "expected `->`")),
                }
            }
            '<' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    if chars.peek() == Some(&'>') {
                        bump!();
                        out.push((Tok::BiArrow, pos));
                        continue;
                    }
                }
                return Err(SourceError::syntax(pos, "expected `<->`"));
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None => {
                            return Err(SourceError::syntax(pos, "unterminated string"));
                        }
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            other => {
                                return Err(SourceError::syntax(
                                    pos,
                                    format!("bad escape `\\{}`", other.unwrap_or(' ')),
                                ))
                            }
                        },
                        Some(c) => s.push(c),
                    }
                }
                out.push((Tok::Name(s), pos));
            }
            c if is_name_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    s.push(c);
                    bump!();
                }
                out.push((Tok::Name(s), pos));
            }
            other => {
                return Err(SourceError::syntax(
                    pos,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(out)
}

/// Renders a name the way the canonical exporter does: bare when it is a
/// plain identifier run, quoted otherwise.
pub fn render_name(name: &str) -> String {
    if !name.is_empty() && name.chars().all(is_name_char) {
        name.to_string()
    } else {
        let escaped = name.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}

// ---------------------------------------------------------------------------
// Raw declarations
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located<T> {
    pub pos: Pos,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawClassification {
    pub name: Located<String>,
    pub types: Vec<Located<String>>,
    pub instances: Vec<Located<String>>,
    pub holds: Vec<(Located<String>, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    pub key: Located<String>,
    pub entries: Vec<(Located<String>, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub name: Located<String>,
    pub cls: Located<String>,
    pub cols: Vec<(Located<String>, String)>,
    pub rows: Vec<RawRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawInfomorphism {
    pub name: Located<String>,
    pub source: Located<String>,
    pub target: Located<String>,
    pub type_map: Vec<(Located<String>, String)>,
    pub inst_map: Vec<(Located<String>, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawArrow {
    pub name: Located<String>,
    pub dom: Located<String>,
    pub cod: Located<String>,
    pub col_map: Vec<(Located<String>, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSchema {
    pub name: Located<String>,
    pub cls: Located<String>,
    pub relations: Vec<(Located<String>, Vec<(Located<String>, String)>)>,
    pub arrows: Vec<RawArrow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDatabase {
    pub name: Located<String>,
    pub schema: Located<String>,
    pub cls: Located<String>,
    pub keys: Vec<(Located<String>, Vec<Located<String>>)>,
    pub keymaps: Vec<(Located<String>, Vec<(Located<String>, String)>)>,
    pub rows: Vec<(Located<String>, Vec<RawRow>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMorphism {
    pub name: Located<String>,
    pub src: Located<String>,
    pub dst: Located<String>,
    pub col_map: Vec<(Located<String>, String)>,
    pub key_map: Vec<(Located<String>, String)>,
    pub type_map: Option<Vec<(Located<String>, String)>>,
    pub inst_map: Option<Vec<(Located<String>, String)>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawWorkspace {
    pub classifications: Vec<RawClassification>,
    pub tables: Vec<RawTable>,
    pub infomorphisms: Vec<RawInfomorphism>,
    pub schemas: Vec<RawSchema>,
    pub databases: Vec<RawDatabase>,
    pub morphisms: Vec<RawMorphism>,
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.tokens.get(self.idx)
    }

    fn pos(&self) -> Pos {
        self.tokens
            .get(self.idx)
            .or_else(|| self.tokens.last())
            .map(|(_, p)| *p)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn next(&mut self) -> Result<(Tok, Pos), SourceError> {
        let item = self
            .tokens
            .get(self.idx)
            .cloned()
            .ok_or_else(|| SourceError::syntax(self.pos(), "unexpected end of input"))?;
        self.idx += 1;
        Ok(item)
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, SourceError> {
        let (got, pos) = self.next()?;
        if got == tok {
            Ok(pos)
        } else {
            Err(SourceError::syntax(
                pos,
                format!("expected {tok}, found {got}"),
            ))
        }
    }

    fn name(&mut self) -> Result<Located<String>, SourceError> {
        let (got, pos) = self.next()?;
        match got {
            Tok::Name(n) => Ok(Located { pos, value: n }),
            other => Err(SourceError::syntax(
                pos,
                format!("expected a name, found {other}"),
            )),
        }
    }

    fn at(&self, tok: &Tok) -> bool {
        matches!(self.peek(), Some((t, _)) if t == tok)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    /// Comma-separated names, possibly empty, up to `;`.
    fn name_list(&mut self) -> Result<Vec<Located<String>>, SourceError> {
        let mut out = Vec::new();
        if self.at(&Tok::Semi) {
            return Ok(out);
        }
        loop {
            out.push(self.name()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    /// Comma-separated `left SEP right` pairs, possibly empty, stopping
    /// before `end`.
    fn pair_list(
        &mut self,
        sep: Tok,
        end: &Tok,
    ) -> Result<Vec<(Located<String>, String)>, SourceError> {
        let mut out = Vec::new();
        if self.at(end) {
            return Ok(out);
        }
        loop {
            let left = self.name()?;
            self.expect(sep.clone())?;
            let right = self.name()?;
            out.push((left, right.value));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    fn row(&mut self) -> Result<RawRow, SourceError> {
        let key = self.name()?;
        self.expect(Tok::Arrow)?;
        self.expect(Tok::LParen)?;
        let entries = self.pair_list(Tok::Eq, &Tok::RParen)?;
        self.expect(Tok::RParen)?;
        Ok(RawRow { key, entries })
    }

    fn row_list(&mut self) -> Result<Vec<RawRow>, SourceError> {
        let mut out = Vec::new();
        if self.at(&Tok::Semi) {
            return Ok(out);
        }
        loop {
            out.push(self.row()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    fn over(&mut self) -> Result<(), SourceError> {
        let word = self.name()?;
        if word.value == "over" {
            Ok(())
        } else {
            Err(SourceError::syntax(word.pos, "expected `over`"))
        }
    }

    fn classification(&mut self) -> Result<RawClassification, SourceError> {
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = RawClassification {
            name,
            types: Vec::new(),
            instances: Vec::new(),
            holds: Vec::new(),
        };
        while !self.eat(&Tok::RBrace) {
            let clause = self.name()?;
            self.expect(Tok::Colon)?;
            match clause.value.as_str() {
                "types" => decl.types = self.name_list()?,
                "instances" => decl.instances = self.name_list()?,
                "holds" => decl.holds = self.pair_list(Tok::Colon, &Tok::Semi)?,
                other => {
                    return Err(SourceError::syntax(
                        clause.pos,
                        format!("unknown classification clause `{other}`"),
                    ))
                }
            }
            self.expect(Tok::Semi)?;
        }
        Ok(decl)
    }

    fn table(&mut self) -> Result<RawTable, SourceError> {
        let name = self.name()?;
        self.over()?;
        let cls = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = RawTable {
            name,
            cls,
            cols: Vec::new(),
            rows: Vec::new(),
        };
        while !self.eat(&Tok::RBrace) {
            let clause = self.name()?;
            self.expect(Tok::Colon)?;
            match clause.value.as_str() {
                "cols" => decl.cols = self.pair_list(Tok::Colon, &Tok::Semi)?,
                "rows" => decl.rows = self.row_list()?,
                other => {
                    return Err(SourceError::syntax(
                        clause.pos,
                        format!("unknown table clause `{other}`"),
                    ))
                }
            }
            self.expect(Tok::Semi)?;
        }
        Ok(decl)
    }

    fn infomorphism(&mut self) -> Result<RawInfomorphism, SourceError> {
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let source = self.name()?;
        self.expect(Tok::BiArrow)?;
        let target = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = RawInfomorphism {
            name,
            source,
            target,
            type_map: Vec::new(),
            inst_map: Vec::new(),
        };
        while !self.eat(&Tok::RBrace) {
            let clause = self.name()?;
            self.expect(Tok::Colon)?;
            match clause.value.as_str() {
                "f" => decl.type_map = self.pair_list(Tok::Arrow, &Tok::Semi)?,
                "g" => decl.inst_map = self.pair_list(Tok::Arrow, &Tok::Semi)?,
                other => {
                    return Err(SourceError::syntax(
                        clause.pos,
                        format!("unknown infomorphism clause `{other}`"),
                    ))
                }
            }
            self.expect(Tok::Semi)?;
        }
        Ok(decl)
    }

    fn schema(&mut self) -> Result<RawSchema, SourceError> {
        let name = self.name()?;
        self.over()?;
        let cls = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = RawSchema {
            name,
            cls,
            relations: Vec::new(),
            arrows: Vec::new(),
        };
        while !self.eat(&Tok::RBrace) {
            let clause = self.name()?;
            match clause.value.as_str() {
                "relations" => {
                    loop {
                        let rel = self.name()?;
                        self.expect(Tok::LParen)?;
                        let cols = self.pair_list(Tok::Colon, &Tok::RParen)?;
                        self.expect(Tok::RParen)?;
                        decl.relations.push((rel, cols));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::Semi)?;
                }
                "arrows" => {
                    let arrow_name = self.name()?;
                    self.expect(Tok::Colon)?;
                    let dom = self.name()?;
                    self.expect(Tok::Arrow)?;
                    let cod = self.name()?;
                    self.expect(Tok::LBrace)?;
                    let col_map = self.pair_list(Tok::Arrow, &Tok::RBrace)?;
                    self.expect(Tok::RBrace)?;
                    self.expect(Tok::Semi)?;
                    decl.arrows.push(RawArrow {
                        name: arrow_name,
                        dom,
                        cod,
                        col_map,
                    });
                }
                other => {
                    return Err(SourceError::syntax(
                        clause.pos,
                        format!("unknown schema clause `{other}`"),
                    ))
                }
            }
        }
        Ok(decl)
    }

    fn database(&mut self) -> Result<RawDatabase, SourceError> {
        let name = self.name()?;
        self.over()?;
        let schema = self.name()?;
        self.expect(Tok::Comma)?;
        let cls = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = RawDatabase {
            name,
            schema,
            cls,
            keys: Vec::new(),
            keymaps: Vec::new(),
            rows: Vec::new(),
        };
        while !self.eat(&Tok::RBrace) {
            let clause = self.name()?;
            match clause.value.as_str() {
                "keys" => {
                    let rel = self.name()?;
                    self.expect(Tok::Colon)?;
                    let list = self.name_list()?;
                    self.expect(Tok::Semi)?;
                    decl.keys.push((rel, list));
                }
                "keymap" => {
                    let arrow = self.name()?;
                    self.expect(Tok::Colon)?;
                    let list = self.pair_list(Tok::Arrow, &Tok::Semi)?;
                    self.expect(Tok::Semi)?;
                    decl.keymaps.push((arrow, list));
                }
                "rows" => {
                    let rel = self.name()?;
                    self.expect(Tok::Colon)?;
                    let list = self.row_list()?;
                    self.expect(Tok::Semi)?;
                    decl.rows.push((rel, list));
                }
                other => {
                    return Err(SourceError::syntax(
                        clause.pos,
                        format!("unknown database clause `{other}`"),
                    ))
                }
            }
        }
        Ok(decl)
    }

    fn morphism(&mut self) -> Result<RawMorphism, SourceError> {
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let src = self.name()?;
        self.expect(Tok::Arrow)?;
        let dst = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = RawMorphism {
            name,
            src,
            dst,
            col_map: Vec::new(),
            key_map: Vec::new(),
            type_map: None,
            inst_map: None,
        };
        while !self.eat(&Tok::RBrace) {
            let clause = self.name()?;
            self.expect(Tok::Colon)?;
            match clause.value.as_str() {
                "h" => decl.col_map = self.pair_list(Tok::Arrow, &Tok::Semi)?,
                "k" => decl.key_map = self.pair_list(Tok::Arrow, &Tok::Semi)?,
                "f" => decl.type_map = Some(self.pair_list(Tok::Arrow, &Tok::Semi)?),
                "g" => decl.inst_map = Some(self.pair_list(Tok::Arrow, &Tok::Semi)?),
                other => {
                    return Err(SourceError::syntax(
                        clause.pos,
                        format!("unknown morphism clause `{other}`"),
                    ))
                }
            }
            self.expect(Tok::Semi)?;
        }
        Ok(decl)
    }
}

/// Parses one source text into raw declarations.
pub fn parse_raw(text: &str) -> Result<RawWorkspace, SourceError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, idx: 0 };
    let mut ws = RawWorkspace::default();
    while parser.peek().is_some() {
        let head = parser.name()?;
        match head.value.as_str() {
            "classification" => ws.classifications.push(parser.classification()?),
            "table" => ws.tables.push(parser.table()?),
            "infomorphism" => ws.infomorphisms.push(parser.infomorphism()?),
            "schema" => ws.schemas.push(parser.schema()?),
            "database" => ws.databases.push(parser.database()?),
            "morphism" => ws.morphisms.push(parser.morphism()?),
            other => {
                return Err(SourceError::syntax(
                    head.pos,
                    format!("unknown declaration `{other}`"),
                ))
            }
        }
    }
    Ok(ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_an_empty_workspace() {
        let ws = parse_raw("").unwrap();
        assert_eq!(ws, RawWorkspace::default());
        let ws = parse_raw("# just a comment\n").unwrap();
        assert_eq!(ws, RawWorkspace::default());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_raw("classification X {\n  types Dept;\n}").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        assert_eq!(err.pos.line, 2);
        let err = parse_raw("widget X {}").unwrap_err();
        assert_eq!(err.pos.line, 1);
        assert_eq!(err.pos.col, 1);
    }

    #[test]
    fn quoted_names_round_trip() {
        let ws = parse_raw("classification \"odd name⟨,⟩\" { types: a; instances: ; }").unwrap();
        assert_eq!(ws.classifications[0].name.value, "odd name⟨,⟩");
        assert_eq!(render_name("odd name⟨,⟩"), "\"odd name⟨,⟩\"");
        assert_eq!(render_name("plain_1"), "plain_1");
    }

    #[test]
    fn empty_tuple_rows_parse() {
        let ws = parse_raw("table T over C { rows: k1 -> (), k2 -> (); }").unwrap();
        assert_eq!(ws.tables[0].rows.len(), 2);
        assert!(ws.tables[0].rows[0].entries.is_empty());
    }
}
