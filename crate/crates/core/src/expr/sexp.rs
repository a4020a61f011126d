use super::ParseError;

/// Untyped s-expression with byte offsets for error reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, pos: usize },
    List { items: Vec<Sexp>, pos: usize },
}

impl Sexp {
    pub fn pos(&self) -> usize {
        match self {
            Sexp::Atom { pos, .. } | Sexp::List { pos, .. } => *pos,
        }
    }
}

/// Reads exactly one s-expression from `text`. `;` starts a comment that
/// runs to the end of the line.
pub fn read_sexp(text: &str) -> Result<Sexp, ParseError> {
    let mut reader = Reader { text, pos: 0 };
    reader.skip_ws();
    if reader.at_end() {
        return Err(ParseError::Syntax { pos: reader.pos, message: "empty input".into() });
    }
    let sexp = reader.read()?;
    reader.skip_ws();
    if !reader.at_end() {
        return Err(ParseError::Syntax { pos: reader.pos, message: "trailing input after expression".into() });
    }
    Ok(sexp)
}

struct Reader<'a> {
    text: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
            } else if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        let start = self.pos;
        match self.peek() {
            None => Err(ParseError::Syntax { pos: start, message: "unexpected end of input".into() }),
            Some(')') => Err(ParseError::Syntax { pos: start, message: "unexpected ')'".into() }),
            Some('(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(ParseError::Syntax { pos: start, message: "unclosed '('".into() }),
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List { items, pos: start });
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                Ok(Sexp::Atom { text: self.text[start..self.pos].to_string(), pos: start })
            }
        }
    }
}
