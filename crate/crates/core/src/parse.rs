//! Recursive-descent parser for the class grammar.
//!
//! ```text
//! expr := atom | func
//! atom := "I" | "D" | "L" | "F2" | "All"
//! func := name "(" args ")"
//! name := "Ik" | "Dk" | "Lk" | "Vk" | "Hk" | "Av" | "V" | "H"
//!       | "comp" | "merge" | "and" | "or" | "rev" | "cpl" | "inv"
//! ```
//!
//! Whitespace between tokens is ignored. `Av` takes permutation literals,
//! either compact digits (`2413`) or bracketed integers (`[10 2 1 …]`).

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::ClassExpr;
use crate::perm::Perm;

pub fn parse_class(text: &str) -> Result<ClassExpr> {
    let mut parser = Parser { src: text, pos: 0 };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.syntax("trailing input"));
    }
    expr.validate()?;
    Ok(expr)
}

impl FromStr for ClassExpr {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_class(text)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, message: message.into() }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit())))
            .map_or(self.rest().len(), |(i, _)| i);
        if len == 0 {
            return Err(self.syntax("expected a class name"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self.rest().chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return Err(self.syntax("expected a nonnegative integer"));
        }
        let digits = &self.rest()[..len];
        let value = digits.parse().map_err(|_| self.syntax("integer out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn literal(&mut self) -> Result<Perm> {
        self.skip_ws();
        let start = self.pos;
        let len = if self.peek() == Some('[') {
            self.rest().find(']').map(|i| i + 1).ok_or_else(|| self.syntax("unclosed '['"))?
        } else {
            self.rest().chars().take_while(char::is_ascii_digit).count()
        };
        if len == 0 {
            return Err(self.syntax("expected a permutation literal"));
        }
        let text = &self.rest()[..len];
        let perm = text
            .parse::<Perm>()
            .map_err(|e| Error::BadLiteral { pos: start, message: e.to_string() })?;
        if perm.is_empty() {
            return Err(Error::BadLiteral { pos: start, message: "patterns must be nonempty".into() });
        }
        self.pos += len;
        Ok(perm)
    }

    fn expr_list(&mut self) -> Result<Vec<ClassExpr>> {
        let mut items = vec![self.expr()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
                items.push(self.expr()?);
            } else {
                return Ok(items);
            }
        }
    }

    fn expr(&mut self) -> Result<ClassExpr> {
        self.skip_ws();
        let name_pos = self.pos;
        let name = self.ident()?.to_string();
        let atom = match name.as_str() {
            "I" => Some(ClassExpr::Inc),
            "D" => Some(ClassExpr::Dec),
            "L" => Some(ClassExpr::Layered),
            "F2" => Some(ClassExpr::F2),
            "All" => Some(ClassExpr::All),
            _ => None,
        };
        if let Some(atom) = atom {
            return Ok(atom);
        }
        let param: fn(usize) -> ClassExpr = match name.as_str() {
            "Ik" => ClassExpr::Ik,
            "Dk" => ClassExpr::Dk,
            "Lk" => ClassExpr::Lk,
            "Vk" => ClassExpr::Vk,
            "Hk" => ClassExpr::Hk,
            "Av" | "V" | "H" | "comp" | "merge" | "and" | "or" | "rev" | "cpl" | "inv" => {
                return self.operator(&name);
            }
            _ => return Err(Error::Syntax { pos: name_pos, message: format!("unknown class name {name:?}") }),
        };
        self.eat('(')?;
        let k = self.integer()?;
        self.eat(')')?;
        Ok(param(k))
    }

    fn operator(&mut self, name: &str) -> Result<ClassExpr> {
        self.eat('(')?;
        self.skip_ws();
        if self.peek() == Some(')') {
            return Err(self.syntax(format!("{name} needs at least one argument")));
        }
        let node = match name {
            "Av" => {
                let mut patterns = vec![self.literal()?];
                loop {
                    self.skip_ws();
                    if self.peek() != Some(',') {
                        break;
                    }
                    self.pos += 1;
                    patterns.push(self.literal()?);
                }
                ClassExpr::Av(patterns)
            }
            "V" => ClassExpr::VerticalMerge(self.expr_list()?),
            "H" => ClassExpr::HorizontalMerge(self.expr_list()?),
            "comp" => ClassExpr::Compose(self.expr_list()?),
            "merge" => ClassExpr::Merge(self.expr_list()?),
            "and" => ClassExpr::Intersect(self.expr_list()?),
            "or" => ClassExpr::Union(self.expr_list()?),
            _ => {
                let child = Box::new(self.expr()?);
                match name {
                    "rev" => ClassExpr::Rev(child),
                    "cpl" => ClassExpr::Cpl(child),
                    _ => ClassExpr::Inv(child),
                }
            }
        };
        self.eat(')')?;
        node.validate()?;
        Ok(node)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse_class("Av(321)").unwrap(), ClassExpr::av([p("321")]));
        assert_eq!(
            parse_class("comp(Vk(2),Hk(2))").unwrap(),
            ClassExpr::comp([ClassExpr::Vk(2), ClassExpr::Hk(2)])
        );
        assert_eq!(
            parse_class(" or ( Lk( 2 ) , rev(Lk(2)) ) ").unwrap(),
            ClassExpr::or([ClassExpr::Lk(2), ClassExpr::Lk(2).rev()])
        );
        assert_eq!(
            parse_class("Av([10 9 8 7 6 5 4 3 2 1], 12)").unwrap(),
            ClassExpr::av([Perm::decreasing(10), p("12")])
        );
        assert_eq!(parse_class("V(I)").unwrap(), ClassExpr::vertical([ClassExpr::Inc]));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse_class("Av()"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_class("Ik("), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_class("Foo"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_class("I I"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_class("comp(I,"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_class(""), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn literal_and_arity_errors() {
        assert!(matches!(parse_class("Av(112)"), Err(Error::BadLiteral { pos: 3, .. })));
        assert!(matches!(parse_class("Av([1 3])"), Err(Error::BadLiteral { .. })));
        assert!(matches!(parse_class("comp(I)"), Err(Error::Arity(_))));
        assert!(matches!(parse_class("merge(I)"), Err(Error::Arity(_))));
        assert!(matches!(parse_class("Lk(0)"), Err(Error::Arity(_))));
        assert!(matches!(parse_class("Av(12,12)"), Err(Error::Arity(_))));
        assert!(matches!(parse_class("rev(I,D)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn render_round_trips() {
        for text in [
            "I",
            "All",
            "F2",
            "Ik(0)",
            "Av(2413,3142)",
            "comp(merge(I,D),merge(I,D))",
            "inv(V(inv(I),inv(Av(231))))",
            "and(V(Av(213),Av(132)),Av(21354))",
            "H(I,D,Lk(3))",
            "cpl(rev(or(Lk(2),rev(Lk(2)))))",
        ] {
            let e = parse_class(text).unwrap();
            assert_eq!(e.render(), text);
            assert_eq!(parse_class(&e.render()).unwrap(), e);
        }
    }
}
