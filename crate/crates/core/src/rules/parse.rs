//! Hand-rolled lexer and recursive-descent parser for the rule language.
//!
//! ```text
//! rule := head "<-" expr "."        # one statement per rule
//! head := IDENT [ "=" VALUE ]       # class rule when IDENT is the class attribute
//! expr := conj ( "|" conj )*
//! conj := term ( "&" term )*
//! term := [ "!" ] ( IDENT [ "=" VALUE ] | "(" expr ")" )
//! ```
//!
//! `&` binds tighter than `|`, `!` tightest. `#` starts a line comment.
//! A bare IDENT naming a binary `{T, F}` feature abbreviates `IDENT=T`;
//! any other IDENT that is not a schema feature is a non-atomic symbol.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Literal, Rule, RuleExpr, RuleHead, Ruleset};
use crate::schema::Schema;

/// A syntax or binding error, with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Value(String),
    Arrow,
    Dot,
    Amp,
    Pipe,
    Bang,
    LParen,
    RParen,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Value(s) => format!("value `{s}`"),
            Tok::Arrow => "`<-`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Amp => "`&`".to_string(),
            Tok::Pipe => "`|`".to_string(),
            Tok::Bang => "`!`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Eq => "`=`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    /// Set after an `=`: the next token is lexed as a VALUE, whose
    /// character set is wider than IDENT (UCI class labels include `+`/`-`).
    value_follows: bool,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_value_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '&' | '|' | '!' | '(' | ')' | '=' | '.' | '#' | '<')
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer { chars: text.chars().collect(), pos: 0, line: 1, col: 1, value_follows: false }
    }

    fn peek_char(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn advance(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.advance();
            } else if c == '#' {
                while let Some(c) = self.peek_char() {
                    if c == '\n' {
                        break;
                    }
                    self.advance();
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let at = |tok| Token { tok, line, col };

        let Some(c) = self.peek_char() else {
            if self.value_follows {
                return Err(ParseError::new(line, col, "expected a value after `=`"));
            }
            return Ok(at(Tok::Eof));
        };

        if self.value_follows {
            self.value_follows = false;
            let mut value = String::new();
            while let Some(c) = self.peek_char() {
                if !is_value_char(c) {
                    break;
                }
                value.push(c);
                self.advance();
            }
            if value.is_empty() {
                return Err(ParseError::new(line, col, "expected a value after `=`"));
            }
            return Ok(at(Tok::Value(value)));
        }

        match c {
            '<' => {
                self.advance();
                if self.peek_char() == Some('-') {
                    self.advance();
                    Ok(at(Tok::Arrow))
                } else {
                    Err(ParseError::new(line, col, "expected `<-`"))
                }
            }
            '.' => {
                self.advance();
                Ok(at(Tok::Dot))
            }
            '&' => {
                self.advance();
                Ok(at(Tok::Amp))
            }
            '|' => {
                self.advance();
                Ok(at(Tok::Pipe))
            }
            '!' => {
                self.advance();
                Ok(at(Tok::Bang))
            }
            '(' => {
                self.advance();
                Ok(at(Tok::LParen))
            }
            ')' => {
                self.advance();
                Ok(at(Tok::RParen))
            }
            '=' => {
                self.advance();
                self.value_follows = true;
                Ok(at(Tok::Eq))
            }
            c if is_ident_start(c) => {
                let mut name = String::new();
                while let Some(c) = self.peek_char() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    name.push(c);
                    self.advance();
                }
                Ok(at(Tok::Ident(name)))
            }
            other => Err(ParseError::new(line, col, format!("unexpected character `{other}`"))),
        }
    }
}

struct Parser<'s> {
    lexer: Lexer,
    peeked: Option<Token>,
    schema: &'s Schema,
}

impl<'s> Parser<'s> {
    fn new(text: &str, schema: &'s Schema) -> Self {
        Parser { lexer: Lexer::new(text), peeked: None, schema }
    }

    fn peek(&mut self) -> Result<&Token, ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next_token(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> Result<bool, ParseError> {
        if &self.peek()?.tok == tok {
            self.next()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect(&mut self, tok: Tok, context: &str) -> Result<Token, ParseError> {
        let found = self.next()?;
        if found.tok == tok {
            Ok(found)
        } else {
            Err(ParseError::new(
                found.line,
                found.col,
                format!("expected {} {context}, found {}", tok.describe(), found.tok.describe()),
            ))
        }
    }

    fn expect_ident(&mut self, context: &str) -> Result<(String, usize, usize), ParseError> {
        let found = self.next()?;
        match found.tok {
            Tok::Ident(name) => Ok((name, found.line, found.col)),
            other => Err(ParseError::new(
                found.line,
                found.col,
                format!("expected a name {context}, found {}", other.describe()),
            )),
        }
    }

    fn expect_value(&mut self) -> Result<(String, usize, usize), ParseError> {
        let found = self.next()?;
        match found.tok {
            Tok::Value(v) => Ok((v, found.line, found.col)),
            other => Err(ParseError::new(
                found.line,
                found.col,
                format!("expected a value after `=`, found {}", other.describe()),
            )),
        }
    }

    fn statement(&mut self, statement: usize) -> Result<Rule, ParseError> {
        let head = self.head()?;
        self.expect(Tok::Arrow, "after the rule head")?;
        let antecedent = self.disjunction()?;
        self.expect(Tok::Dot, "at the end of the rule")?;
        Ok(Rule { head, antecedent, statement })
    }

    fn head(&mut self) -> Result<RuleHead, ParseError> {
        let (name, line, col) = self.expect_ident("at the start of a rule")?;
        let class = self.schema.class();
        if name == class.name() {
            let value = if self.eat(&Tok::Eq)? {
                let (value, vline, vcol) = self.expect_value()?;
                class.value_index(&value).ok_or_else(|| {
                    ParseError::new(
                        vline,
                        vcol,
                        format!("class attribute `{name}` has no value `{value}`"),
                    )
                })?
            } else if class.is_binary_tf() {
                class.value_index("T").expect("binary {T,F} domain")
            } else {
                return Err(ParseError::new(
                    line,
                    col,
                    format!(
                        "class attribute `{name}` is not binary {{T, F}}; \
                         write `{name}=VALUE` in the rule head"
                    ),
                ));
            };
            return Ok(RuleHead::Class(value));
        }
        if self.schema.feature_index(&name).is_some() {
            return Err(ParseError::new(
                line,
                col,
                format!("rule consequent `{name}` is an input feature; only the class attribute or a new symbol may be concluded"),
            ));
        }
        if self.peek()?.tok == Tok::Eq {
            let eq = self.next()?;
            return Err(ParseError::new(
                eq.line,
                eq.col,
                format!("symbol `{name}` cannot take a value; only features and the class attribute do"),
            ));
        }
        Ok(RuleHead::Symbol(name))
    }

    fn disjunction(&mut self) -> Result<RuleExpr, ParseError> {
        let mut children = alloc::vec![self.conjunction()?];
        while self.eat(&Tok::Pipe)? {
            children.push(self.conjunction()?);
        }
        Ok(if children.len() == 1 { children.pop().expect("len 1") } else { RuleExpr::Or(children) })
    }

    fn conjunction(&mut self) -> Result<RuleExpr, ParseError> {
        let mut children = alloc::vec![self.term()?];
        while self.eat(&Tok::Amp)? {
            children.push(self.term()?);
        }
        Ok(if children.len() == 1 { children.pop().expect("len 1") } else { RuleExpr::And(children) })
    }

    fn term(&mut self) -> Result<RuleExpr, ParseError> {
        let negated = self.eat(&Tok::Bang)?;
        if self.eat(&Tok::LParen)? {
            let inner = self.disjunction()?;
            self.expect(Tok::RParen, "to close the group")?;
            return Ok(if negated { RuleExpr::Not(Box::new(inner)) } else { inner });
        }
        let (name, line, col) = self.expect_ident("in the rule body")?;
        if name == self.schema.class().name() {
            return Err(ParseError::new(
                line,
                col,
                format!("class attribute `{name}` cannot appear in an antecedent"),
            ));
        }
        if let Some(feature) = self.schema.feature_index(&name) {
            let feat = self.schema.feature(feature);
            let value = if self.eat(&Tok::Eq)? {
                let (value, vline, vcol) = self.expect_value()?;
                feat.value_index(&value).ok_or_else(|| {
                    ParseError::new(
                        vline,
                        vcol,
                        format!("feature `{name}` has no value `{value}`"),
                    )
                })?
            } else if feat.is_binary_tf() {
                feat.value_index("T").expect("binary {T,F} domain")
            } else {
                return Err(ParseError::new(
                    line,
                    col,
                    format!(
                        "feature `{name}` is not binary {{T, F}}; write `{name}=VALUE`"
                    ),
                ));
            };
            return Ok(RuleExpr::Literal(Literal { feature, value, negated }));
        }
        if self.peek()?.tok == Tok::Eq {
            let eq = self.next()?;
            return Err(ParseError::new(
                eq.line,
                eq.col,
                format!("symbol `{name}` cannot take a value; only features do"),
            ));
        }
        let symbol = RuleExpr::Symbol(name);
        Ok(if negated { RuleExpr::Not(Box::new(symbol)) } else { symbol })
    }
}

/// Parses rule source text against `schema`.
///
/// Literals are bound to feature/value indices here; names that match no
/// feature become non-atomic symbols to be resolved by other rules. Empty
/// (or comment-only) text parses to an empty ruleset.
pub fn parse_ruleset(text: &str, schema: &Schema) -> Result<Ruleset, ParseError> {
    let mut parser = Parser::new(text, schema);
    let mut rules: Vec<Rule> = Vec::new();
    let mut definitions: BTreeMap<String, Vec<usize>> = BTreeMap::new();

    while parser.peek()?.tok != Tok::Eof {
        let rule = parser.statement(rules.len() + 1)?;
        if let RuleHead::Symbol(name) = &rule.head {
            definitions.entry(name.clone()).or_default().push(rules.len());
        }
        rules.push(rule);
    }

    Ok(Ruleset { schema: schema.clone(), rules, definitions })
}
