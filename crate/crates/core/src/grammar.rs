//! Textual grammar for forms and lattices.
//!
//! Shapes: `<d1,...,dn>` is a diagonal lattice (`<>` is the empty lattice),
//! `[a,b,c]` is a binary form, `gram[[...],[...]]` is a full symmetric Gram
//! matrix, and `++` joins terms as an orthogonal sum. Whitespace between
//! tokens is ignored. `format_form` emits the most compact spelling:
//! diagonal lattices as `<...>`, non-diagonal rank-2 as `[a,b,c]`, anything
//! else as `gram[...]`, and `parse_form(format_form(l)) == l` always holds.

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, GramLattice};

/// Parses any lattice expression, validating each term and the whole sum.
pub fn parse_form(input: &str) -> Result<GramLattice> {
    let mut p = Parser::new(input);
    p.skip_ws();
    let lattice = p.parse_sum()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(lattice)
}

/// Parses an expression that must denote a binary form: `[a,b,c]`, `<a,c>`,
/// or any other rank-2 spelling.
pub fn parse_binary(input: &str) -> Result<BinaryForm> {
    let lattice = parse_form(input)?;
    match lattice.binary_form() {
        Some(f) => Ok(f),
        None => Err(Error::Syntax {
            position: 0,
            message: format!("expected a rank-2 form, found rank {}", lattice.rank()),
        }),
    }
}

/// Canonical, most compact rendering; inverse of `parse_form` on its image.
pub fn format_form(lattice: &GramLattice) -> String {
    if lattice.is_diagonal() {
        let entries: Vec<String> = lattice
            .diagonal_entries()
            .iter()
            .map(|d| d.to_string())
            .collect();
        return format!("<{}>", entries.join(","));
    }
    if let Some(f) = lattice.binary_form() {
        return f.to_string();
    }
    let rows: Vec<String> = lattice
        .rows()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("gram[{}]", rows.join(","))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, expected: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", expected as char)))
        }
    }

    fn parse_sum(&mut self) -> Result<GramLattice> {
        let mut acc = self.parse_term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'+') {
                let mark = self.pos;
                self.pos += 1;
                if self.peek() == Some(b'+') {
                    self.pos += 1;
                    self.skip_ws();
                    let next = self.parse_term()?;
                    acc = acc.orthogonal_sum(&next);
                } else {
                    self.pos = mark;
                    return Err(self.err("expected '++'"));
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_term(&mut self) -> Result<GramLattice> {
        self.skip_ws();
        match self.peek() {
            Some(b'<') => self.parse_diagonal(),
            Some(b'[') => self.parse_binary_term(),
            Some(b'g') => self.parse_gram(),
            _ => Err(self.err("expected a form: '<...>', '[a,b,c]', or 'gram[...]'")),
        }
    }

    fn parse_diagonal(&mut self) -> Result<GramLattice> {
        self.eat(b'<')?;
        self.skip_ws();
        if self.peek() == Some(b'>') {
            self.pos += 1;
            return Ok(GramLattice::empty());
        }
        let entries = self.parse_int_list(b'>')?;
        GramLattice::diagonal(&entries)
    }

    fn parse_binary_term(&mut self) -> Result<GramLattice> {
        self.eat(b'[')?;
        let entries = self.parse_int_list(b']')?;
        if entries.len() != 3 {
            return Err(self.err("a binary form takes exactly three coefficients"));
        }
        Ok(BinaryForm::new(entries[0], entries[1], entries[2])?.lattice())
    }

    fn parse_gram(&mut self) -> Result<GramLattice> {
        for &ch in b"gram" {
            if self.peek() == Some(ch) {
                self.pos += 1;
            } else {
                return Err(self.err("expected 'gram['"));
            }
        }
        self.eat(b'[')?;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        loop {
            self.eat(b'[')?;
            rows.push(self.parse_int_list(b']')?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ']' after a row")),
            }
        }
        GramLattice::from_rows(rows)
    }

    /// Parses `int (',' int)*` followed by the closing byte (already past the
    /// opener; the list must be nonempty).
    fn parse_int_list(&mut self, close: u8) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        loop {
            out.push(self.parse_int()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b) if b == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err(&format!("expected ',' or '{}'", close as char))),
            }
        }
    }

    fn parse_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        text.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }
}
