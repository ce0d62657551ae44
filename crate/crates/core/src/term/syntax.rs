//! Concrete term syntax.
//!
//! ```text
//! term   := unary ( ('|' | 'par') unary )*            right-nested
//! unary  := '(' 'new' NAME ')' unary
//!         | ('!' | 'bang') ['[' INT ']'] unary
//!         | 'collect' NAME '=' literal '.' unary
//!         | atom
//! atom   := '0' | 'nil' | '(' term ')'
//!         | 'intent' NAME '{' intent-clause* '}'
//!         | 'tool' NAME '{' tool-clause* '}'
//!         | 'exec' NAME params ['tx' ('true'|'false'|'unknown')]
//!         | 'resource' STRING STRING
//!         | 'prompt' STRING '(' names ')'
//!         | 'init' '{' names '}'
//!         | 'tools' '[' tool-atoms ']' ['caps' '{' names '}']
//!         | 'call' NAME params ['with' names]
//!         | 'validate' NAME params 'against' '{' param-clause* '}' ['gate' '(' names ')' ['approval']]
//!         | 'pending' NAME params ['awaiting' '(' names ')'] ['approval']
//!         | 'token' NAME | 'summary' tool-atom
//!         | 'result' literal | 'error' NAME STRING
//! ```
//!
//! Intent clauses: `description S`, `slot n : type [required|optional] [S] [[S, ...]]`,
//! `transactional true|false|unknown`, `failures [E retry 3, ...]`,
//! `depends [tool requires, ...]`. Tool clauses: `description S`,
//! `param n : type [required] [S] [[S, ...]]`, `side_effects read|write|delete|none`,
//! `requires_approval B`, `summary S`, `failures [...]`, `depends [...]`, and
//! `plus` for an empty metadata block. `NAME` is an identifier or a quoted
//! string. Comments run from `//` to the end of the line.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{
    Decimal, Dependency, FailureMode, Gate, Ident, Intent, JsonSchema, Literal, Params, ProcessTerm,
    PropertySpec, RecoveryStrategy, Relation, SideEffects, SlotDef, SlotType, Tool, ToolMetadata,
    TriBool,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate slot `{slot}` in `{owner}` at {line}:{column}")]
    DuplicateSlot {
        owner: String,
        slot: String,
        line: usize,
        column: usize,
    },
    #[error("unknown term variant `{keyword}` at {line}:{column}")]
    UnknownVariant {
        keyword: String,
        line: usize,
        column: usize,
    },
}

/// Parse term source text.
pub fn parse_term(text: &str) -> Result<ProcessTerm, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let term = parser.term()?;
    if let Some(tok) = parser.peek() {
        return Err(parser.error_at(tok, "unexpected trailing input"));
    }
    Ok(term)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    Dec(f64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let (tline, tcol) = (line, col);
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                s.push(chars[i]);
                bump!();
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut s = String::new();
            s.push(c);
            bump!();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            let is_dec = i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit();
            if is_dec {
                s.push('.');
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump!();
                }
                match s.parse::<f64>() {
                    Ok(v) => Tok::Dec(v),
                    Err(_) => return Err(syntax(tline, tcol, "malformed decimal")),
                }
            } else {
                match s.parse::<i64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => return Err(syntax(tline, tcol, "integer out of range")),
                }
            }
        } else if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                if i >= chars.len() {
                    return Err(syntax(tline, tcol, "unterminated string"));
                }
                let ch = chars[i];
                if ch == '"' {
                    bump!();
                    break;
                }
                if ch == '\\' {
                    bump!();
                    if i >= chars.len() {
                        return Err(syntax(tline, tcol, "unterminated escape"));
                    }
                    let esc = chars[i];
                    s.push(match esc {
                        'n' => '\n',
                        't' => '\t',
                        'r' => '\r',
                        '"' => '"',
                        '\\' => '\\',
                        _ => return Err(syntax(line, col, "unknown escape")),
                    });
                    bump!();
                    continue;
                }
                s.push(ch);
                bump!();
            }
            Tok::Str(s)
        } else if "(){}[]|!,:=.?".contains(c) {
            bump!();
            Tok::Sym(c)
        } else {
            return Err(syntax(tline, tcol, &alloc::format!("unexpected character `{c}`")));
        };
        out.push(Token {
            tok,
            line: tline,
            column: tcol,
        });
    }
    Ok(out)
}

fn syntax(line: usize, column: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn peek_is_sym(&self, c: char) -> bool {
        self.peek_tok() == Some(&Tok::Sym(c))
    }

    fn peek_is_word(&self, w: &str) -> bool {
        matches!(self.peek_tok(), Some(Tok::Ident(s)) if s == w)
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.eof()),
        }
    }

    fn eof(&self) -> ParseError {
        let (line, column) = self
            .tokens
            .last()
            .map(|t| (t.line, t.column + 1))
            .unwrap_or((1, 1));
        syntax(line, column, "unexpected end of input")
    }

    fn error_at(&self, tok: &Token, message: &str) -> ParseError {
        syntax(tok.line, tok.column, message)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.column),
            None => match self.eof() {
                ParseError::Syntax { line, column, .. } => (line, column),
                _ => (1, 1),
            },
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next()?;
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.error_at(&t, &alloc::format!("expected `{c}`")))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Ident(s) if s == w => Ok(()),
            _ => Err(self.error_at(&t, &alloc::format!("expected `{w}`"))),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek_is_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.peek_is_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<Ident, ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Ident(s) | Tok::Str(s) => Ok(s),
            _ => Err(self.error_at(&t, "expected a name")),
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Str(s) => Ok(s),
            _ => Err(self.error_at(&t, "expected a string")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Int(i) => Ok(i),
            _ => Err(self.error_at(&t, "expected an integer")),
        }
    }

    fn boolean(&mut self) -> Result<bool, ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Ident(s) if s == "true" => Ok(true),
            Tok::Ident(s) if s == "false" => Ok(false),
            _ => Err(self.error_at(&t, "expected `true` or `false`")),
        }
    }

    fn tribool(&mut self) -> Result<TriBool, ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Ident(s) if s == "true" => Ok(TriBool::True),
            Tok::Ident(s) if s == "false" => Ok(TriBool::False),
            Tok::Ident(s) if s == "unknown" => Ok(TriBool::Unknown),
            _ => Err(self.error_at(&t, "expected `true`, `false` or `unknown`")),
        }
    }

    fn names_until(&mut self, close: char) -> Result<Vec<Ident>, ParseError> {
        let mut out = Vec::new();
        if self.eat_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(self.name()?);
            if self.eat_sym(close) {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    fn term(&mut self) -> Result<ProcessTerm, ParseError> {
        let first = self.unary()?;
        if self.eat_sym('|') || self.eat_word("par") {
            let rest = self.term()?;
            return Ok(ProcessTerm::par(first, rest));
        }
        Ok(first)
    }

    fn unary(&mut self) -> Result<ProcessTerm, ParseError> {
        if self.peek_is_sym('(')
            && matches!(self.tokens.get(self.pos + 1).map(|t| &t.tok), Some(Tok::Ident(s)) if s == "new")
        {
            self.pos += 2;
            let channel = self.name()?;
            self.expect_sym(')')?;
            let body = self.unary()?;
            return Ok(ProcessTerm::restrict(channel, body));
        }
        if self.eat_sym('!') || self.eat_word("bang") {
            let mut copies = 0u32;
            if self.eat_sym('[') {
                let (line, column) = self.here();
                let n = self.int()?;
                copies = u32::try_from(n).map_err(|_| syntax(line, column, "copy count out of range"))?;
                self.expect_sym(']')?;
            }
            let body = self.unary()?;
            return Ok(ProcessTerm::Repl {
                body: Box::new(body),
                copies,
            });
        }
        if self.eat_word("collect") {
            let slot = self.name()?;
            self.expect_sym('=')?;
            let value = self.literal()?;
            self.expect_sym('.')?;
            let then = self.unary()?;
            return Ok(ProcessTerm::collect(slot, value, then));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<ProcessTerm, ParseError> {
        let t = self.next()?;
        let word = match &t.tok {
            Tok::Int(0) => return Ok(ProcessTerm::Nil),
            Tok::Sym('(') => {
                let inner = self.term()?;
                self.expect_sym(')')?;
                return Ok(inner);
            }
            Tok::Ident(w) => w.clone(),
            _ => return Err(self.error_at(&t, "expected a process term")),
        };
        match word.as_str() {
            "nil" => Ok(ProcessTerm::Nil),
            "intent" => self.intent_body().map(ProcessTerm::Intent),
            "tool" => self.tool_body().map(ProcessTerm::Tool),
            "exec" => {
                let intent = self.name()?;
                let bindings = self.params()?;
                let transactional = if self.eat_word("tx") {
                    self.tribool()?
                } else {
                    TriBool::False
                };
                Ok(ProcessTerm::ExecuteS {
                    intent,
                    bindings,
                    transactional,
                })
            }
            "resource" => {
                let uri = self.string()?;
                let content = self.string()?;
                Ok(ProcessTerm::Resource { uri, content })
            }
            "prompt" => {
                let template = self.string()?;
                self.expect_sym('(')?;
                let args = self.names_until(')')?;
                Ok(ProcessTerm::Prompt { template, args })
            }
            "init" => {
                self.expect_sym('{')?;
                let caps = self.names_until('}')?.into_iter().collect();
                Ok(ProcessTerm::Initialize { caps })
            }
            "tools" => {
                self.expect_sym('[')?;
                let mut tools = Vec::new();
                if !self.eat_sym(']') {
                    loop {
                        self.expect_word("tool")?;
                        tools.push(self.tool_body()?);
                        if self.eat_sym(']') {
                            break;
                        }
                        self.expect_sym(',')?;
                    }
                }
                let mut caps = BTreeSet::new();
                if self.eat_word("caps") {
                    self.expect_sym('{')?;
                    caps = self.names_until('}')?.into_iter().collect();
                }
                Ok(ProcessTerm::ToolsList { tools, caps })
            }
            "call" => {
                let name = self.name()?;
                let params = self.params()?;
                let mut credentials = Vec::new();
                if self.eat_word("with") {
                    credentials.push(self.name()?);
                    while self.eat_sym(',') {
                        credentials.push(self.name()?);
                    }
                }
                Ok(ProcessTerm::ToolCall {
                    name,
                    params,
                    credentials,
                })
            }
            "validate" => {
                let tool = self.name()?;
                let params = self.params()?;
                self.expect_word("against")?;
                self.expect_sym('{')?;
                let mut owner = Tool::new(tool.clone(), "", JsonSchema::default());
                let mut seen = BTreeSet::new();
                while !self.eat_sym('}') {
                    self.expect_word("param")?;
                    self.param_clause(&mut owner, &mut seen)?;
                }
                let gate = if self.eat_word("gate") {
                    self.expect_sym('(')?;
                    let awaiting = self.names_until(')')?;
                    let approval = self.eat_word("approval");
                    Some(Gate { awaiting, approval })
                } else {
                    None
                };
                Ok(ProcessTerm::Validate {
                    tool,
                    params,
                    schema: owner.schema,
                    gate,
                })
            }
            "pending" => {
                let tool = self.name()?;
                let params = self.params()?;
                let mut awaiting = Vec::new();
                if self.eat_word("awaiting") {
                    self.expect_sym('(')?;
                    awaiting = self.names_until(')')?;
                }
                let approval = self.eat_word("approval");
                Ok(ProcessTerm::Pending {
                    tool,
                    params,
                    awaiting,
                    approval,
                })
            }
            "token" => Ok(ProcessTerm::Token { from: self.name()? }),
            "summary" => {
                self.expect_word("tool")?;
                Ok(ProcessTerm::ToolSummary {
                    tool: self.tool_body()?,
                })
            }
            "result" => Ok(ProcessTerm::result(self.literal()?)),
            "error" => {
                let error_type = self.name()?;
                let message = self.string()?;
                Ok(ProcessTerm::ErrorT { error_type, message })
            }
            _ => Err(ParseError::UnknownVariant {
                keyword: word,
                line: t.line,
                column: t.column,
            }),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let t = self.next()?;
        Ok(match t.tok {
            Tok::Str(s) => Literal::Text(s),
            Tok::Int(i) => Literal::Integer(i),
            Tok::Dec(d) => Literal::Decimal(Decimal::new(d)),
            Tok::Sym('?') => Literal::Var(self.name()?),
            Tok::Ident(ref w) if w == "true" => Literal::Boolean(true),
            Tok::Ident(ref w) if w == "false" => Literal::Boolean(false),
            Tok::Ident(ref w) if w == "date" => Literal::Date(self.string()?),
            _ => return Err(self.error_at(&t, "expected a literal")),
        })
    }

    fn params(&mut self) -> Result<Params, ParseError> {
        self.expect_sym('{')?;
        let mut out = BTreeMap::new();
        if self.eat_sym('}') {
            return Ok(out);
        }
        loop {
            let (line, column) = self.here();
            let key = self.name()?;
            self.expect_sym(':')?;
            let value = self.literal()?;
            if out.insert(key, value).is_some() {
                return Err(syntax(line, column, "duplicate parameter"));
            }
            if self.eat_sym('}') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    fn slot_type(&mut self) -> Result<SlotType, ParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Ident(s) => SlotType::from_name(s).ok_or_else(|| self.error_at(&t, "unknown slot type")),
            _ => Err(self.error_at(&t, "expected a slot type")),
        }
    }

    fn value_list(&mut self) -> Result<Option<Vec<String>>, ParseError> {
        if !self.eat_sym('[') {
            return Ok(None);
        }
        let (line, column) = self.here();
        let mut values = Vec::new();
        if !self.eat_sym(']') {
            loop {
                values.push(self.string()?);
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        let distinct: BTreeSet<&String> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(syntax(line, column, "duplicate value in list"));
        }
        Ok(Some(values))
    }

    fn failures(&mut self) -> Result<Vec<FailureMode>, ParseError> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            let error = self.name()?;
            let t = self.next()?;
            let recovery = match &t.tok {
                Tok::Ident(w) if w == "retry" => {
                    let (line, column) = self.here();
                    let n = self.int()?;
                    let n = u32::try_from(n).map_err(|_| syntax(line, column, "retry count out of range"))?;
                    RecoveryStrategy::Retry { n }
                }
                Tok::Ident(w) if w == "fallback" => RecoveryStrategy::Fallback { tool: self.name()? },
                Tok::Ident(w) if w == "user_prompt" => RecoveryStrategy::UserPrompt {
                    message: self.string()?,
                },
                Tok::Ident(w) if w == "abort" => RecoveryStrategy::Abort,
                _ => return Err(self.error_at(&t, "expected a recovery strategy")),
            };
            out.push(FailureMode { error, recovery });
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    fn dependencies(&mut self) -> Result<Vec<Dependency>, ParseError> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            let tool = self.name()?;
            let t = self.next()?;
            let relation = match &t.tok {
                Tok::Ident(w) => Relation::from_name(w).ok_or_else(|| self.error_at(&t, "unknown relation"))?,
                _ => return Err(self.error_at(&t, "expected a relation")),
            };
            out.push(Dependency { tool, relation });
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.expect_sym(',')?;
        }
    }

    fn intent_body(&mut self) -> Result<Intent, ParseError> {
        let name = self.name()?;
        self.expect_sym('{')?;
        let mut intent = Intent::new(name, "", TriBool::Unknown);
        let mut seen = BTreeSet::new();
        loop {
            let t = self.next()?;
            let word = match &t.tok {
                Tok::Sym('}') => break,
                Tok::Ident(w) => w.clone(),
                _ => return Err(self.error_at(&t, "expected an intent clause")),
            };
            match word.as_str() {
                "description" => intent.description = self.string()?,
                "slot" => {
                    let (line, column) = self.here();
                    let slot_name = self.name()?;
                    if !seen.insert(slot_name.clone()) {
                        return Err(ParseError::DuplicateSlot {
                            owner: intent.name.clone(),
                            slot: slot_name,
                            line,
                            column,
                        });
                    }
                    self.expect_sym(':')?;
                    let type_name = self.slot_type()?;
                    let required = if self.eat_word("optional") {
                        false
                    } else {
                        self.eat_word("required");
                        true
                    };
                    let description = match self.peek_tok() {
                        Some(Tok::Str(_)) => self.string()?,
                        _ => String::new(),
                    };
                    let possible_values = self.value_list()?.unwrap_or_default();
                    let slot = SlotDef {
                        name: slot_name,
                        type_name,
                        description,
                        possible_values,
                    };
                    if required {
                        intent.required.push(slot);
                    } else {
                        intent.optional.push(slot);
                    }
                }
                "transactional" => intent.transactional = self.tribool()?,
                "failures" => intent.failure_modes = self.failures()?,
                "depends" => intent.dependencies = self.dependencies()?,
                _ => return Err(self.error_at(&t, "unknown intent clause")),
            }
        }
        Ok(intent)
    }

    fn param_clause(&mut self, tool: &mut Tool, seen: &mut BTreeSet<Ident>) -> Result<(), ParseError> {
        let (line, column) = self.here();
        let name = self.name()?;
        if !seen.insert(name.clone()) {
            return Err(ParseError::DuplicateSlot {
                owner: tool.name.clone(),
                slot: name,
                line,
                column,
            });
        }
        self.expect_sym(':')?;
        let type_name = self.slot_type()?;
        if self.eat_word("required") {
            tool.schema.required.push(name.clone());
        }
        let description = match self.peek_tok() {
            Some(Tok::Str(_)) => Some(self.string()?),
            _ => None,
        };
        let enum_values = self.value_list()?;
        tool.schema.properties.insert(
            name,
            PropertySpec {
                type_name,
                description,
                enum_values,
            },
        );
        Ok(())
    }

    fn tool_body(&mut self) -> Result<Tool, ParseError> {
        let name = self.name()?;
        self.expect_sym('{')?;
        let mut tool = Tool::new(name, "", JsonSchema::default());
        let mut seen = BTreeSet::new();
        loop {
            let t = self.next()?;
            let word = match &t.tok {
                Tok::Sym('}') => break,
                Tok::Ident(w) => w.clone(),
                _ => return Err(self.error_at(&t, "expected a tool clause")),
            };
            match word.as_str() {
                "description" => tool.description = self.string()?,
                "param" => self.param_clause(&mut tool, &mut seen)?,
                "plus" => {
                    tool.metadata.get_or_insert_with(ToolMetadata::default);
                }
                "side_effects" => {
                    let w = self.next()?;
                    let effect = match &w.tok {
                        Tok::Ident(s) => SideEffects::from_name(s),
                        _ => None,
                    }
                    .ok_or_else(|| self.error_at(&w, "expected read, write, delete or none"))?;
                    tool.metadata.get_or_insert_with(ToolMetadata::default).side_effects = Some(effect);
                }
                "requires_approval" => {
                    let b = self.boolean()?;
                    tool.metadata.get_or_insert_with(ToolMetadata::default).requires_approval = Some(b);
                }
                "summary" => {
                    let s = self.string()?;
                    tool.metadata.get_or_insert_with(ToolMetadata::default).summary = Some(s);
                }
                "failures" => {
                    let f = self.failures()?;
                    tool.metadata.get_or_insert_with(ToolMetadata::default).failure_modes = Some(f);
                }
                "depends" => {
                    let d = self.dependencies()?;
                    tool.metadata.get_or_insert_with(ToolMetadata::default).dependencies = Some(d);
                }
                _ => return Err(self.error_at(&t, "unknown tool clause")),
            }
        }
        Ok(tool)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::term::canonicalize;

    #[test]
    fn zero_is_nil() {
        assert_eq!(parse_term("0").unwrap(), ProcessTerm::Nil);
        assert_eq!(parse_term("nil").unwrap(), ProcessTerm::Nil);
    }

    #[test]
    fn restriction_of_parallel_nils() {
        let t = parse_term("(new c)(0 | 0)").unwrap();
        assert_eq!(
            t,
            ProcessTerm::restrict("c", ProcessTerm::par(ProcessTerm::Nil, ProcessTerm::Nil))
        );
    }

    #[test]
    fn book_flight_source_parses_to_fixture() {
        let t = parse_term(fixtures::BOOK_FLIGHT_SOURCE).unwrap();
        match &t {
            ProcessTerm::Intent(i) => {
                assert_eq!(i.name, "BookFlight");
                assert_eq!(i.transactional, TriBool::True);
                assert_eq!(i.required.len(), 3);
                assert_eq!(i.optional[0].possible_values, ["economy", "business"]);
            }
            other => panic!("expected intent, got {other:?}"),
        }
        assert_eq!(t, ProcessTerm::Intent(fixtures::book_flight()));
    }

    #[test]
    fn duplicate_slot_is_rejected() {
        let err = parse_term("intent X { slot a : string slot a : integer optional }").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateSlot { ref slot, .. } if slot == "a"), "{err:?}");
    }

    #[test]
    fn unknown_keyword_is_reported_with_position() {
        let err = parse_term("0 |\n  frobnicate x").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownVariant {
                keyword: "frobnicate".into(),
                line: 2,
                column: 3
            }
        );
    }

    #[test]
    fn syntax_error_carries_line_and_column() {
        let err = parse_term("call t {a: }").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, column: 12, .. }), "{err:?}");
    }

    #[test]
    fn canonical_restriction_names_round_trip() {
        let t = canonicalize(&parse_term("(new k) result ?k").unwrap());
        let printed = alloc::format!("{t}");
        assert_eq!(parse_term(&printed).unwrap(), t);
    }
}
