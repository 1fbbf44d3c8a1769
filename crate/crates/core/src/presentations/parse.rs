//! Text format:
//!
//! ```text
//! presentation := "<" ident* "|" [relator ("," relator)*] ">"
//! relator      := word | word "=" word
//! word         := atom+
//! atom         := ident ["^" int] | "[" word "," word "]" ["^" int] | "(" word ")" ["^" int]
//! ```
//!
//! `#` starts a comment running to the end of the line.

use super::{FinitePresentation, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let s: String = chars[start..i].iter().collect();
            let value = s.parse::<i64>().map_err(|_| Error::Syntax {
                line: start_line,
                col: start_col,
                msg: format!("integer `{s}` out of range"),
            })?;
            out.push(Token { tok: Tok::Int(value), line: start_line, col: start_col });
            continue;
        }
        if "<>|,=[]()^".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line, col });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: Vec<String>,
    end: (usize, usize),
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let toks = tokenize(src)?;
        let lines: Vec<&str> = src.split('\n').collect();
        let end = (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1);
        Ok(Parser { toks, pos: 0, names: Vec::new(), end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let t = describe(t);
                self.err(format!("expected `{c}`, found {t}"))
            }
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == c)
    }

    fn presentation(&mut self) -> Result<FinitePresentation> {
        self.expect('<')?;
        let mut names = Vec::new();
        while let Some(Tok::Ident(name)) = self.peek() {
            if names.contains(name) {
                let name = name.clone();
                let (line, col) = self.here();
                return Err(Error::Syntax { line, col, msg: format!("generator `{name}` declared twice") });
            }
            names.push(name.clone());
            self.pos += 1;
        }
        self.expect('|')?;
        self.names = names;
        let mut relators = Vec::new();
        let mut positions = Vec::new();
        if !self.at_sym('>') {
            loop {
                positions.push(self.here());
                relators.push(self.relator()?);
                if self.at_sym(',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect('>')?;
        if self.pos != self.toks.len() {
            return self.err("trailing input after `>`");
        }
        for (r, &(line, col)) in relators.iter().zip(&positions) {
            if r.is_identity() {
                return Err(Error::Syntax { line, col, msg: "relator is empty after free reduction".into() });
            }
        }
        FinitePresentation::new(self.names.clone(), relators)
    }

    fn relator(&mut self) -> Result<Word> {
        let lhs = self.word()?;
        if self.at_sym('=') {
            self.pos += 1;
            let rhs = self.word()?;
            Ok(&lhs * &rhs.inverse())
        } else {
            Ok(lhs)
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        let mut any = false;
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::Sym('[')) | Some(Tok::Sym('(')) => {
                    let a = self.atom()?;
                    w = &w * &a;
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return match self.peek() {
                Some(t) => {
                    let t = describe(t);
                    self.err(format!("expected a word, found {t}"))
                }
                None => self.err("expected a word, found end of input"),
            };
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word> {
        let (line, col) = self.here();
        let base = match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.names.iter().position(|n| *n == name) {
                    Some(g) => Word::gen(g),
                    None => return Err(Error::UndeclaredGenerator { name, line, col }),
                }
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Word::commutator(&u, &v)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(')')?;
                u
            }
            _ => return self.err("expected an atom"),
        };
        if self.at_sym('^') {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(k)) => {
                    let k = *k;
                    self.pos += 1;
                    Ok(base.pow(k))
                }
                _ => self.err("expected an integer exponent after `^`"),
            }
        } else {
            Ok(base)
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(k) => format!("integer `{k}`"),
        Tok::Sym(c) => format!("`{c}`"),
    }
}

pub fn parse_presentation(text: &str) -> Result<FinitePresentation> {
    Parser::new(text)?.presentation()
}

/// Parse a single word (or `u = v` relation) over the given generator names.
pub fn parse_word(text: &str, names: &[impl AsRef<str>]) -> Result<Word> {
    let mut p = Parser::new(text)?;
    p.names = names.iter().map(|n| n.as_ref().to_string()).collect();
    let w = p.relator()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after word");
    }
    Ok(w)
}

/// Parse a comma-separated list of words; empty input gives an empty list.
pub fn parse_word_list(text: &str, names: &[impl AsRef<str>]) -> Result<Vec<Word>> {
    let mut p = Parser::new(text)?;
    p.names = names.iter().map(|n| n.as_ref().to_string()).collect();
    let mut out = Vec::new();
    if p.peek().is_none() {
        return Ok(out);
    }
    loop {
        out.push(p.relator()?);
        if p.at_sym(',') {
            p.pos += 1;
        } else {
            break;
        }
    }
    if p.pos != p.toks.len() {
        return p.err("trailing input after word list");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn commutator_shorthand() {
        let p = parse_presentation("< a b | [a,b] >").unwrap();
        assert_eq!(p.names(), vec!["a", "b"]);
        assert_eq!(p.relators()[0].signed_letters(), vec![1, 2, -1, -2]);
        assert_eq!(p.render(), "< a b | a b a^-1 b^-1 >");
    }

    #[test]
    fn higman_text() {
        let p = parse_presentation(
            "< a1 a2 a3 a4 | a2^-1 a1 a2 a1^-2, a3^-1 a2 a3 a2^-2, a4^-1 a3 a4 a3^-2, a1^-1 a4 a1 a4^-2 >",
        )
        .unwrap();
        assert_eq!((p.ngens(), p.nrels()), (4, 4));
    }

    #[test]
    fn empty_relator_rejected() {
        let e = parse_presentation("< a | a a^-1 >").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, col: 7, .. }), "{e}");
    }

    #[test]
    fn undeclared_generator_position() {
        let e = parse_presentation("< a |\n  a b >").unwrap_err();
        assert!(matches!(e, Error::UndeclaredGenerator { ref name, line: 2, col: 5 } if name == "b"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_presentation("< a | a^ >").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, col: 10, .. }), "{e}");
        let e = parse_presentation("< a | a").unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }), "{e}");
        let e = parse_presentation("< a | a ! >").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, col: 9, .. }), "{e}");
    }

    #[test]
    fn relations_comments_and_powers() {
        let p = parse_presentation("# the binary icosahedral shape\n< s t | s^2 = t^3, (s t)^5 = s^2 # end\n >").unwrap();
        assert_eq!(p.render(), "< s t | s^2 t^-3, s t s t s t s t s t s^-2 >");
        let p = parse_presentation("< a | [a, a^2] a >").unwrap();
        assert_eq!(p.render(), "< a | a >");
    }

    #[test]
    fn free_group_and_empty_generators() {
        let p = parse_presentation("< a b | >").unwrap();
        assert_eq!(p.nrels(), 0);
        assert_eq!(p.render(), "< a b | >");
        let p = parse_presentation("< | >").unwrap();
        assert_eq!(p.ngens(), 0);
    }

    #[test]
    fn words_and_lists() {
        let names = ["x", "y"];
        assert_eq!(parse_word("x y^-1 = y", &names).unwrap().signed_letters(), vec![1, -2, -2]);
        assert_eq!(parse_word_list("x, y^2, [x,y]", &names).unwrap().len(), 3);
        assert!(parse_word_list("", &names).unwrap().is_empty());
        assert!(parse_word("z", &names).is_err());
    }

    fn presentation_strategy() -> impl Strategy<Value = FinitePresentation> {
        let word = prop::collection::vec((0usize..3, -3i64..=3), 1..8);
        prop::collection::vec(word, 0..5).prop_map(|rels| {
            let rels = rels.into_iter().map(Word::from_syllables).filter(|w| !w.is_identity()).collect();
            FinitePresentation::new(["a", "b2", "c_d"], rels).unwrap()
        })
    }

    proptest! {
        #[test]
        fn parse_render_roundtrip(p in presentation_strategy()) {
            let text = p.render();
            prop_assert_eq!(parse_presentation(&text).unwrap(), p);
        }
    }
}
