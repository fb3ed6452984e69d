//! The textual program format.
//!
//! ```text
//! program  := (pragma | method | goal)*
//! method   := NAME ":" head ":-" body "." | NAME ":" head "."
//! head     := atom ("," atom)*
//! body     := clause ("," clause)* ; clause := "(" atom ("|" atom)* ")"
//! pragma   := "#use" ("G" | "Gd") "(" INT "," INT ")" "as" NAME "."
//! goal     := "?-" atom ("," atom)* "."
//! ```
//!
//! `%` starts a comment running to the end of the line. Atom and method
//! names are `[A-Za-z_][A-Za-z0-9_]*` with optional trailing primes. A
//! pragma binds a generalized connective: a method declared under the bound
//! name compiles with that link as its body (`G`) or synchronizer (`Gd`).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::connectives::{girard_type, GirardType, Polarity};
use crate::program::{Method, Program, ProgramError, Synchro};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A parsed program plus the goal declared in the file, if any.
#[derive(Debug)]
pub struct ParsedProgram {
    pub program: Program,
    pub goal: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Colon,
    ColonDash,
    QuestionDash,
    HashUse,
    Comma,
    Dot,
    LParen,
    RParen,
    Pipe,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::ColonDash => f.write_str("`:-`"),
            Tok::QuestionDash => f.write_str("`?-`"),
            Tok::HashUse => f.write_str("`#use`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek_char() {
                if c == '%' {
                    while let Some(c) = self.peek_char() {
                        self.bump(c);
                        if c == '\n' {
                            break;
                        }
                    }
                } else if c.is_whitespace() {
                    self.bump(c);
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek_char() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                ',' => {
                    self.bump(c);
                    Tok::Comma
                }
                '.' => {
                    self.bump(c);
                    Tok::Dot
                }
                '(' => {
                    self.bump(c);
                    Tok::LParen
                }
                ')' => {
                    self.bump(c);
                    Tok::RParen
                }
                '|' => {
                    self.bump(c);
                    Tok::Pipe
                }
                ':' => {
                    self.bump(c);
                    if self.peek_char() == Some('-') {
                        self.bump('-');
                        Tok::ColonDash
                    } else {
                        Tok::Colon
                    }
                }
                '?' => {
                    self.bump(c);
                    if self.peek_char() == Some('-') {
                        self.bump('-');
                        Tok::QuestionDash
                    } else {
                        return Err(self.error("expected `?-`"));
                    }
                }
                '#' => {
                    self.bump(c);
                    let word = self.ident_body();
                    if word == "use" {
                        Tok::HashUse
                    } else {
                        return Err(ParseError {
                            line,
                            col,
                            message: format!("unknown pragma `#{word}`"),
                        });
                    }
                }
                c if c.is_ascii_digit() => {
                    let mut n = String::new();
                    while let Some(d) = self.peek_char() {
                        if d.is_ascii_digit() {
                            n.push(d);
                            self.bump(d);
                        } else {
                            break;
                        }
                    }
                    // An identifier may not start with a digit.
                    if self.peek_char().is_some_and(|d| d.is_alphabetic() || d == '_') {
                        return Err(self.error("identifiers may not start with a digit"));
                    }
                    Tok::Int(n.parse().map_err(|_| self.error("integer too large"))?)
                }
                c if c.is_alphabetic() || c == '_' => Tok::Ident(self.ident_body()),
                other => {
                    return Err(self.error(format!("unexpected character `{other}`")));
                }
            };
            out.push((tok, line, col));
        }
    }

    fn ident_body(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek_char() {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.bump(c);
            } else {
                break;
            }
        }
        while self.peek_char() == Some('\'') {
            s.push('\'');
            self.bump('\'');
        }
        s
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let got = self.peek().clone();
        if got == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {want}, found {got}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            got => Err(self.error_here(format!("expected {what}, found {got}"))),
        }
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            got => Err(self.error_here(format!("expected an integer, found {got}"))),
        }
    }

    fn atom_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut atoms = vec![self.ident("an atom")?];
        while self.peek() == &Tok::Comma {
            self.next();
            atoms.push(self.ident("an atom")?);
        }
        Ok(atoms)
    }
}

/// Parses a program file. Errors carry a line and column.
pub fn parse_program(text: &str) -> Result<ParsedProgram, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let mut program = Program::new();
    let mut goal: Option<Vec<String>> = None;
    let mut bindings: BTreeMap<String, GirardType> = BTreeMap::new();

    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::HashUse => {
                p.next();
                let (line, col) = p.here();
                let family = p.ident("a connective family (`G` or `Gd`)")?;
                let polarity = match family.as_str() {
                    "G" => Polarity::Primal,
                    "Gd" => Polarity::Dual,
                    other => {
                        return Err(ParseError {
                            line,
                            col,
                            message: format!("unknown connective family `{other}`"),
                        })
                    }
                };
                p.expect(Tok::LParen)?;
                let u = p.int()?;
                p.expect(Tok::Comma)?;
                let v = p.int()?;
                p.expect(Tok::RParen)?;
                let kw = p.ident("`as`")?;
                if kw != "as" {
                    return Err(p.error_here(format!("expected `as`, found `{kw}`")));
                }
                let (nline, ncol) = p.here();
                let name = p.ident("a name")?;
                p.expect(Tok::Dot)?;
                let g = girard_type(u, v, polarity).map_err(|e| ParseError {
                    line,
                    col,
                    message: e.to_string(),
                })?;
                program.register_link(&g);
                if bindings.insert(name.clone(), g).is_some() {
                    return Err(ParseError {
                        line: nline,
                        col: ncol,
                        message: format!("`{name}` is already bound"),
                    });
                }
            }
            Tok::QuestionDash => {
                let (line, col) = p.here();
                p.next();
                let atoms = p.atom_list()?;
                p.expect(Tok::Dot)?;
                if goal.replace(atoms).is_some() {
                    return Err(ParseError {
                        line,
                        col,
                        message: "a goal was already declared".to_string(),
                    });
                }
            }
            Tok::Ident(name) => {
                let (mline, mcol) = p.here();
                p.next();
                p.expect(Tok::Colon)?;
                if matches!(p.peek(), Tok::ColonDash | Tok::Dot) {
                    return Err(p.error_here(
                        "empty head: a method needs at least one head atom",
                    ));
                }
                let head = p.atom_list()?;
                let mut body: Vec<Vec<String>> = Vec::new();
                match p.next() {
                    Tok::Dot => {}
                    Tok::ColonDash => loop {
                        p.expect(Tok::LParen)?;
                        let mut clause = vec![p.ident("an atom")?];
                        while p.peek() == &Tok::Pipe {
                            p.next();
                            clause.push(p.ident("an atom")?);
                        }
                        p.expect(Tok::RParen)?;
                        body.push(clause);
                        match p.next() {
                            Tok::Comma => continue,
                            Tok::Dot => break,
                            got => {
                                return Err(p.error_here(format!(
                                    "expected `,` or `.`, found {got}"
                                )))
                            }
                        }
                    },
                    got => {
                        return Err(
                            p.error_here(format!("expected `:-` or `.`, found {got}"))
                        )
                    }
                }
                let head_refs: Vec<&str> = head.iter().map(String::as_str).collect();
                let clause_refs: Vec<Vec<&str>> = body
                    .iter()
                    .map(|c| c.iter().map(String::as_str).collect())
                    .collect();
                let clause_slices: Vec<&[&str]> =
                    clause_refs.iter().map(Vec::as_slice).collect();
                let at = |e: ProgramError| ParseError {
                    line: mline,
                    col: mcol,
                    message: e.to_string(),
                };
                let method = match bindings.get(&name) {
                    Some(g) => Method::generalized(
                        name.clone(),
                        &head_refs,
                        &clause_slices,
                        g.clone(),
                    )
                    .map_err(at)?,
                    None => {
                        Method::new(name.clone(), &head_refs, &clause_slices).map_err(at)?
                    }
                };
                debug_assert!(matches!(
                    (&method.synchro, bindings.contains_key(&name)),
                    (Synchro::Standard, false) | (Synchro::Generalized(_), true)
                ));
                program.add_method(method).map_err(|e| ParseError {
                    line: mline,
                    col: mcol,
                    message: e.to_string(),
                })?;
            }
            got => {
                return Err(p.error_here(format!(
                    "expected a method, a pragma, or a goal, found {got}"
                )))
            }
        }
    }
    Ok(ParsedProgram { program, goal })
}

/// Parses a comma-separated goal list, as given to `--goal`.
pub fn parse_goal(text: &str) -> Result<Vec<String>, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let atoms = p.atom_list()?;
    p.expect(Tok::Eof)?;
    Ok(atoms)
}
