//! `--config <file>`: line-oriented `key=value` pairs that stand in for flags.
//!
//! Each line `key=value` becomes `--key value`; a bare `key` becomes `--key`.
//! Blank lines and lines starting with `#` are ignored. The expanded flags are
//! placed before the ones typed on the command line, so the latter win.

use std::ffi::OsString;
use std::fs;

pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            let p = it.next().ok_or("--config needs a file path")?;
            path = Some(p);
        } else if let Some(p) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let flags = parse(&text)?;

    // Insert after the program name and subcommand so the flags bind to it.
    let split = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|i| i + 2)
        .unwrap_or(rest.len());
    let mut out: Vec<OsString> = rest[..split].to_vec();
    out.extend(flags);
    out.extend_from_slice(&rest[split..]);
    Ok(out)
}

pub fn parse(text: &str) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (line, None),
        };
        let key = key.trim_start_matches('-');
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(format!("config line {}: bad key in '{raw}'", n + 1));
        }
        out.push(OsString::from(format!("--{key}")));
        if let Some(v) = value {
            out.push(OsString::from(v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_pairs_and_switches() {
        let got = parse("# comment\nA = 2.5\n\nL=1\npair=2,1;3,1\nverbose\n").unwrap();
        assert_eq!(got, os(&["--A", "2.5", "--L", "1", "--pair", "2,1;3,1", "--verbose"]));
        assert!(parse("bad key=1").is_err());
    }

    #[test]
    fn inserts_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        fs::write(&p, "delta=0.01\n").unwrap();
        let argv = os(&["zeromode", "rset", "--config", p.to_str().unwrap(), "--L", "2"]);
        let got = expand(argv).unwrap();
        assert_eq!(got, os(&["zeromode", "rset", "--delta", "0.01", "--L", "2"]));
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(expand(os(&["zeromode", "rset", "--config", "/nonexistent/x"])).is_err());
        assert!(expand(os(&["zeromode", "--config"])).is_err());
    }
}
