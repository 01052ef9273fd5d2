//! Raw policy prose to candidate statement texts.
//!
//! Conservative by design: enumeration markers and bullets are removed,
//! text is split at sentence terminators outside parentheses and quotes, and
//! wording is otherwise left alone. A colon followed on the same line by a
//! capitalized word (e.g. a proviso introduced by "Except") also ends a
//! statement; a colon followed by a line break introduces a list and does
//! not.

pub fn preprocess(raw: &str) -> Vec<String> {
    let text = strip_outer_quotes(raw.trim());
    let (text, truncated) = strip_trailing_ellipsis(text);
    let joined = text
        .lines()
        .map(|l| strip_markers(l.trim()))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n");
    let mut out: Vec<String> = split_sentences(&joined)
        .into_iter()
        .map(|s| strip_markers(&s).split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|s| !s.is_empty())
        .collect();
    if truncated {
        if let Some(last) = out.last_mut() {
            if !last.ends_with(['.', '!', '?']) {
                last.push('.');
            }
        }
    }
    out
}

fn strip_outer_quotes(s: &str) -> &str {
    for (open, close) in [("``", "''"), ("\u{201c}", "\u{201d}"), ("\"", "\"")] {
        if let Some(inner) = s.strip_prefix(open) {
            let inner = inner.trim_end();
            if let Some(inner) = inner.strip_suffix(close) {
                return inner.trim();
            }
            // Excerpts often cut off with an ellipsis after the closing quote.
            for tail in ["...", "\u{2026}"] {
                if let Some(body) = inner.strip_suffix(tail).and_then(|b| b.trim_end().strip_suffix(close)) {
                    return body.trim();
                }
            }
        }
    }
    s
}

fn strip_trailing_ellipsis(s: &str) -> (&str, bool) {
    for tail in ["...", "\u{2026}", "\\dots"] {
        if let Some(body) = s.trim_end().strip_suffix(tail) {
            return (body.trim_end(), true);
        }
    }
    (s, false)
}

/// Removes leading `(a)`, `(1)`, `(iv)` markers and bullet glyphs.
pub fn strip_markers(line: &str) -> String {
    let mut s = line.trim_start();
    loop {
        if let Some(rest) = s.strip_prefix(['\u{2022}', '\u{25e6}', '\u{2023}', '\u{2043}', '\u{00b7}', '*', '-', '\u{2013}']) {
            if rest.starts_with(char::is_whitespace) {
                s = rest.trim_start();
                continue;
            }
        }
        if let Some(rest) = s.strip_prefix('(') {
            if let Some(close) = rest.find(')') {
                let label = &rest[..close];
                if is_enumeration(label) && rest[close + 1..].starts_with(char::is_whitespace) {
                    s = rest[close + 1..].trim_start();
                    continue;
                }
            }
        }
        return s.to_string();
    }
}

fn is_enumeration(label: &str) -> bool {
    if label.is_empty() || label.len() > 6 {
        return false;
    }
    let digits = label.chars().all(|c| c.is_ascii_digit());
    let letter = label.len() == 1 && label.chars().all(|c| c.is_ascii_alphabetic());
    let roman = label.chars().all(|c| matches!(c, 'i' | 'v' | 'x' | 'l' | 'I' | 'V' | 'X' | 'L'));
    digits || letter || roman
}

fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut quoted = false;
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = (depth - 1).max(0),
            '"' => quoted = !quoted,
            '\u{201c}' => quoted = true,
            '\u{201d}' => quoted = false,
            _ => {}
        }
        let mut j = i + 1;
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        let gap = &chars[i + 1..j];
        let at_end = j == chars.len();
        let free = depth == 0 && !quoted;
        let boundary = free
            && match ch {
                '.' | '!' | '?' => at_end || !gap.is_empty(),
                ':' => !gap.is_empty() && !gap.contains(&'\n') && !at_end && chars[j].is_uppercase(),
                _ => false,
            };
        if boundary {
            cur.push(if ch == ':' { '.' } else { ch });
            out.push(std::mem::take(&mut cur));
            i = j;
            continue;
        }
        cur.push(ch);
        i += 1;
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markers_and_splitting() {
        assert!(preprocess("").is_empty());
        assert_eq!(preprocess("(1) A. (2) B."), ["A.", "B."]);
        assert_eq!(preprocess("\u{2022} first item. \n- second (i.e. this) one."), ["first item.", "second (i.e. this) one."]);
        assert_eq!(preprocess("See \"Mr. X. said\" now."), ["See \"Mr. X. said\" now."]);
    }

    #[test]
    fn interior_parentheses_survive() {
        assert_eq!(preprocess("per §§ 205.239(b) and (c). Next one."), ["per §§ 205.239(b) and (c).", "Next one."]);
    }
}
