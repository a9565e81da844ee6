//! Plain-text pattern format:
//!
//! ```text
//! thickness_um=<thickness>
//! count=<N>
//! +1
//! -1
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::physics::DomainPattern;

pub fn format_pattern(pattern: &DomainPattern) -> String {
    let mut s = String::with_capacity(3 * pattern.len() + 32);
    let _ = writeln!(s, "thickness_um={}", pattern.thickness_um());
    let _ = writeln!(s, "count={}", pattern.len());
    for &sign in pattern.signs() {
        s.push_str(if sign > 0 { "+1\n" } else { "-1\n" });
    }
    s
}

pub fn export_pattern(pattern: &DomainPattern, path: &Path) -> Result<()> {
    super::write_file(path, format_pattern(pattern))
}

pub fn parse_pattern(text: &str, path: &Path) -> Result<DomainPattern> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut header = |name: &str| -> Result<(usize, String)> {
        let (n, l) = lines
            .next()
            .ok_or_else(|| err(0, format!("missing `{name}=` header")))?;
        let value = l
            .strip_prefix(name)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| err(n, format!("expected `{name}=<value>`, found `{l}`")))?;
        Ok((n, value.trim().to_string()))
    };
    let (tl, t) = header("thickness_um")?;
    let thickness: f64 = t
        .parse()
        .map_err(|_| err(tl, format!("invalid thickness `{t}`")))?;
    let (cl, c) = header("count")?;
    let count: usize = c
        .parse()
        .map_err(|_| err(cl, format!("invalid count `{c}`")))?;
    let mut signs = Vec::with_capacity(count);
    for (n, l) in lines {
        if l.is_empty() {
            continue;
        }
        match l {
            "+1" | "1" => signs.push(1),
            "-1" => signs.push(-1),
            other => return Err(err(n, format!("expected +1 or -1, found `{other}`"))),
        }
    }
    if signs.len() != count {
        return Err(err(
            cl,
            format!(
                "header declares {count} domains but {} were listed",
                signs.len()
            ),
        ));
    }
    DomainPattern::new(thickness, signs).map_err(|e| err(tl, e.to_string()))
}

pub fn import_pattern(path: &Path) -> Result<DomainPattern> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pattern(&text, path)
}
