//! Text formats accepted on the command line and in generator files.
//!
//! * a map: `n=4:[1,0,3,2]`
//! * a map list: one map per line, blank lines and `#` comments ignored
//! * a class spec: `PORD(5,4)`, `IORD*(6)`, `PD(4)`
//! * a family spec: `CLAIMED_PORD(5,4)`, `G_n(6)`, `GIc_k(6,4,2)`
//!
//! Every parser returns [`Error::Parse`] with a byte offset on malformed input
//! and never panics.

use crate::error::{Error, Result};
use crate::families::FamilyLabel;
use crate::transforms::{ChainMap, Class};
use crate::MAX_N;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            self.err(format!("expected {token:?}"))
        }
    }

    fn peek(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(token)
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected a number");
        }
        // anything longer than this cannot be a valid chain point or size
        if digits > 6 {
            return self.err("number too large");
        }
        let value = self.rest()[..digits].parse().expect("ascii digits");
        self.pos += digits;
        Ok(value)
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Ok(())
    }
}

/// Parses the canonical text form `n=<n>:[i1,...,in]`.
pub fn parse_chain_map(s: &str) -> Result<ChainMap> {
    let mut c = Cursor::new(s);
    let map = chain_map(&mut c)?;
    c.finish()?;
    Ok(map)
}

fn chain_map(c: &mut Cursor<'_>) -> Result<ChainMap> {
    c.eat("n")?;
    c.eat("=")?;
    let n_pos = c.pos;
    let n = c.number()?;
    if n == 0 || n > MAX_N {
        return Err(Error::Parse {
            pos: n_pos,
            msg: format!("chain size {n} outside 1..={MAX_N}"),
        });
    }
    c.eat(":")?;
    c.eat("[")?;
    let mut img = Vec::with_capacity(n);
    if !c.peek("]") {
        loop {
            let pos = c.pos;
            let v = c.number()?;
            if v > n {
                return Err(Error::Parse {
                    pos,
                    msg: format!("image {v} exceeds n={n}"),
                });
            }
            img.push(v);
            if img.len() > n {
                return Err(Error::Parse {
                    pos,
                    msg: format!("more than {n} entries"),
                });
            }
            if c.peek(",") {
                c.eat(",")?;
            } else {
                break;
            }
        }
    }
    c.eat("]")?;
    if img.len() != n {
        return c.err(format!("expected {n} entries, found {}", img.len()));
    }
    ChainMap::new(n, &img).map_err(|e| Error::Parse {
        pos: c.pos,
        msg: e.to_string(),
    })
}

/// Parses a list of maps, one per line. All maps must share the same chain size.
pub fn parse_map_list(s: &str) -> Result<Vec<ChainMap>> {
    let mut maps = Vec::new();
    let mut offset = 0;
    for line in s.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("");
        if !content.trim().is_empty() {
            let map = parse_chain_map(content).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: offset + pos,
                    msg,
                },
                other => other,
            })?;
            if let Some(first) = maps.first() {
                let first: &ChainMap = first;
                if first.n() != map.n() {
                    return Err(Error::Parse {
                        pos: offset,
                        msg: format!("chain size {} differs from {}", map.n(), first.n()),
                    });
                }
            }
            maps.push(map);
        }
        offset += line.len();
    }
    Ok(maps)
}

/// A class with a chain size and an optional image-size bound, e.g. `PORD(5,4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassSpec {
    pub class: Class,
    pub n: usize,
    pub r: Option<usize>,
}

impl std::fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.r {
            Some(r) => write!(f, "{}({},{})", self.class, self.n, r),
            None => write!(f, "{}({})", self.class, self.n),
        }
    }
}

fn name(c: &mut Cursor<'_>) -> Result<String> {
    c.skip_ws();
    let len = c
        .rest()
        .bytes()
        .take_while(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'*' | b'^'))
        .count();
    if len == 0 {
        return c.err("expected a name");
    }
    let s = c.rest()[..len].to_string();
    c.pos += len;
    Ok(s)
}

fn args(c: &mut Cursor<'_>, max: usize) -> Result<Vec<usize>> {
    c.eat("(")?;
    let mut out = vec![c.number()?];
    while c.peek(",") {
        c.eat(",")?;
        if out.len() == max {
            return c.err(format!("at most {max} arguments"));
        }
        out.push(c.number()?);
    }
    c.eat(")")?;
    Ok(out)
}

/// Parses `CLASS(n)` or `CLASS(n,r)`.
pub fn parse_class_spec(s: &str) -> Result<ClassSpec> {
    let mut c = Cursor::new(s);
    let label = name(&mut c)?;
    let class: Class = label.parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("unknown class {label:?}"),
    })?;
    let arg_pos = c.pos;
    let a = args(&mut c, 2)?;
    c.finish()?;
    let n = a[0];
    if n == 0 || n > MAX_N {
        return Err(Error::Parse {
            pos: arg_pos,
            msg: format!("chain size {n} outside 1..={MAX_N}"),
        });
    }
    let r = a.get(1).copied();
    if let Some(r) = r {
        if r > n {
            return Err(Error::Parse {
                pos: arg_pos,
                msg: format!("bound r={r} exceeds n={n}"),
            });
        }
    }
    Ok(ClassSpec { class, n, r })
}

/// A family label with its parameters, e.g. `CLAIMED_PORD(5,4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub label: FamilyLabel,
    pub n: usize,
    pub r: usize,
}

/// Parses `LABEL(n,r)`, `G_n(n)` or `GIc_k(n,r,k)`.
pub fn parse_family_spec(s: &str) -> Result<FamilySpec> {
    let mut c = Cursor::new(s);
    let label_text = name(&mut c)?;
    let arg_pos = c.pos;
    let a = args(&mut c, 3)?;
    c.finish()?;
    let bad = |msg: String| Error::Parse { pos: arg_pos, msg };
    let n = a[0];
    if n == 0 || n > MAX_N {
        return Err(bad(format!("chain size {n} outside 1..={MAX_N}")));
    }
    let r = match a.get(1) {
        Some(&r) => r,
        None if FamilyLabel::parse(&label_text, None) == Ok(FamilyLabel::G) => n,
        None => return Err(bad(format!("{label_text} needs (n,r)"))),
    };
    let label = FamilyLabel::parse(&label_text, a.get(2).copied()).map_err(|e| Error::Parse {
        pos: 0,
        msg: e.to_string(),
    })?;
    Ok(FamilySpec { label, n, r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_map() {
        let m = parse_chain_map("n=4:[1,0,3,2]").unwrap();
        assert_eq!(m.image_word(), vec![1, 0, 3, 2]);
        assert_eq!(m.to_string(), "n=4:[1,0,3,2]");
        assert_eq!(parse_chain_map("  n = 4 : [ 1, 0,3 ,2 ] ").unwrap(), m);
    }

    #[test]
    fn rejects_malformed_maps() {
        for bad in [
            "",
            "n=4",
            "n=4:[1,0,3]",
            "n=4:[1,0,3,2,1]",
            "n=4:[1,0,5,2]",
            "n=0:[]",
            "n=16:[0]",
            "n=4:[1,0,3,2]x",
            "n=99999999999999999999:[1]",
            "n=3:[1,,2]",
        ] {
            assert!(
                matches!(parse_chain_map(bad), Err(Error::Parse { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn parse_error_offsets() {
        let Err(Error::Parse { pos, .. }) = parse_chain_map("n=4:[1,0,7,2]") else {
            panic!("expected parse error");
        };
        assert_eq!(pos, 9);
    }

    #[test]
    fn map_list_with_comments() {
        let src = "# generators\nn=3:[1,0,0]\n\nn=3:[0,2,1] # tail\n";
        let maps = parse_map_list(src).unwrap();
        assert_eq!(maps.len(), 2);
        assert!(parse_map_list("n=3:[1,0,0]\nn=4:[1,0,0,0]\n").is_err());
        let Err(Error::Parse { pos, .. }) = parse_map_list("n=3:[1,0,0]\nn=3:[1,0,9]\n") else {
            panic!("expected parse error");
        };
        assert_eq!(pos, 12 + 9);
    }

    #[test]
    fn class_specs() {
        assert_eq!(
            parse_class_spec("PORD(5,4)").unwrap(),
            ClassSpec {
                class: Class::Pord,
                n: 5,
                r: Some(4)
            }
        );
        assert_eq!(
            parse_class_spec("iord*(6)").unwrap(),
            ClassSpec {
                class: Class::IordStar,
                n: 6,
                r: None
            }
        );
        assert!(parse_class_spec("PORD(5,6)").is_err());
        assert!(parse_class_spec("FOO(5)").is_err());
        assert!(parse_class_spec("PORD(5,4,3)").is_err());
        assert!(parse_class_spec("PORD(5").is_err());
    }

    #[test]
    fn family_specs() {
        assert_eq!(
            parse_family_spec("CLAIMED_PORD(5,4)").unwrap(),
            FamilySpec {
                label: FamilyLabel::ClaimedPord,
                n: 5,
                r: 4
            }
        );
        assert_eq!(
            parse_family_spec("G_n(6)").unwrap(),
            FamilySpec {
                label: FamilyLabel::G,
                n: 6,
                r: 6
            }
        );
        assert_eq!(
            parse_family_spec("GIc_k(6,4,2)").unwrap(),
            FamilySpec {
                label: FamilyLabel::GIc(2),
                n: 6,
                r: 4
            }
        );
        assert!(parse_family_spec("GIc_k(6,4)").is_err());
        assert!(parse_family_spec("E_r(6)").is_err());
    }
}
