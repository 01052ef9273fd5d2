use crate::diagnostic::{Diagnostic, DiagnosticCode, Span};
use crate::model::{
    AnnotationPrefix, ComponentCode, ConsequenceType, Governance, LogicalOperator,
    SemanticAnnotation,
};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Text(String),
    Annot(AnnotationSpec),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Op(LogicalOperator),
    Not,
    Inferred(String),
    OrElse,
    Meta(MetaTag),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum MetaTag {
    Governance(Governance),
    Consequence(ConsequenceType),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Parsed contents of a `( ... )` annotation.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct AnnotationSpec {
    /// `None` for a code-less annotation such as `(polref=...)`.
    pub code: Option<ComponentCode>,
    pub alt: Option<ComponentCode>,
    pub group: Option<char>,
    /// `Some(path)` when the annotation marks a property.
    pub chain: Option<Vec<u32>>,
    pub negated: bool,
    pub semantics: Vec<SemanticAnnotation>,
    /// Unrecognized code or modifier; the span degrades to filler.
    pub unknown: bool,
    pub raw: String,
}

pub(crate) fn lex(src: &str, diags: &mut Vec<Diagnostic>) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer { src, pos: 0, out: Vec::new(), text_start: None, stack: Vec::new() };
    lx.run(diags)?;
    Ok(lx.out)
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    out: Vec<Token>,
    text_start: Option<usize>,
    stack: Vec<(char, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(&mut self, diags: &mut Vec<Diagnostic>) -> Result<(), Diagnostic> {
        while let Some(ch) = self.src[self.pos..].chars().next() {
            let start = self.pos;
            match ch {
                '(' => {
                    self.flush_text();
                    let Some(close) = matching_paren(self.src, start) else {
                        return Err(unbalanced("`(` is never closed", start));
                    };
                    let inner = &self.src[start + 1..close];
                    if looks_like_annotation(inner) {
                        let span = Span::between(start, close + 1);
                        let spec = parse_annotation(inner, span, diags);
                        self.push(Tok::Annot(spec), span);
                        self.pos = close + 1;
                    } else {
                        self.stack.push(('(', start));
                        self.push(Tok::LParen, Span::new(start, 1));
                        self.pos += 1;
                    }
                }
                '{' => {
                    self.flush_text();
                    self.stack.push(('{', start));
                    self.push(Tok::LBrace, Span::new(start, 1));
                    self.pos += 1;
                }
                ')' | '}' => {
                    self.flush_text();
                    let want = if ch == ')' { '(' } else { '{' };
                    match self.stack.pop() {
                        Some((open, _)) if open == want => {}
                        _ => return Err(unbalanced(&format!("unexpected `{ch}`"), start)),
                    }
                    let tok = if ch == ')' { Tok::RParen } else { Tok::RBrace };
                    self.push(tok, Span::new(start, 1));
                    self.pos += 1;
                }
                '[' => {
                    self.flush_text();
                    let Some(rel) = self.src[start..].find(']') else {
                        return Err(unbalanced("`[` is never closed", start));
                    };
                    let close = start + rel;
                    let inner = self.src[start + 1..close].trim();
                    let span = Span::between(start, close + 1);
                    let tok = match inner {
                        "AND" => Tok::Op(LogicalOperator::And),
                        "OR" => Tok::Op(LogicalOperator::Or),
                        "XOR" => Tok::Op(LogicalOperator::Xor),
                        "NOT" => Tok::Not,
                        _ => {
                            if inner.is_empty() {
                                diags.push(
                                    Diagnostic::error(
                                        DiagnosticCode::EmptyAnnotation,
                                        "empty inferred-content brackets",
                                    )
                                    .at(span),
                                );
                            }
                            Tok::Inferred(inner.to_string())
                        }
                    };
                    self.push(tok, span);
                    self.pos = close + 1;
                }
                ']' => return Err(unbalanced("unexpected `]`", start)),
                '@' if self.at_word_start() => {
                    if let Some((tag, len)) = meta_tag(&self.src[start..]) {
                        self.flush_text();
                        self.push(Tok::Meta(tag), Span::new(start, len));
                        self.pos += len;
                    } else {
                        self.text_char(ch);
                    }
                }
                _ => self.text_char(ch),
            }
        }
        self.flush_text();
        if let Some((open, at)) = self.stack.pop() {
            return Err(unbalanced(&format!("`{open}` is never closed"), at));
        }
        Ok(())
    }

    fn at_word_start(&self) -> bool {
        self.src[..self.pos].chars().next_back().is_none_or(char::is_whitespace)
    }

    fn text_char(&mut self, ch: char) {
        if self.text_start.is_none() {
            self.text_start = Some(self.pos);
        }
        self.pos += ch.len_utf8();
    }

    fn push(&mut self, tok: Tok, span: Span) {
        self.out.push(Token { tok, span });
    }

    fn flush_text(&mut self) {
        let Some(start) = self.text_start.take() else { return };
        let text = &self.src[start..self.pos];
        let mut cursor = 0;
        for (at, len) in or_else_positions(text) {
            if at > cursor && !text[cursor..at].trim().is_empty() {
                self.push(Tok::Text(text[cursor..at].to_string()), Span::between(start + cursor, start + at));
            }
            self.push(Tok::OrElse, Span::new(start + at, len));
            cursor = at + len;
        }
        if cursor < text.len() && !text[cursor..].trim().is_empty() {
            self.push(Tok::Text(text[cursor..].to_string()), Span::between(start + cursor, self.pos));
        }
    }
}

fn unbalanced(msg: &str, at: usize) -> Diagnostic {
    Diagnostic::error(DiagnosticCode::UnbalancedDelimiter, msg).at(Span::new(at, 1))
}

fn matching_paren(src: &str, open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, ch) in src[open..].char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Annotations are tight: no padding inside the parentheses and whitespace
/// only after a `,` or `;` separator. Anything else opens a group.
pub(crate) fn looks_like_annotation(inner: &str) -> bool {
    if inner.is_empty() {
        return true;
    }
    let first = inner.chars().next().unwrap();
    let last = inner.chars().next_back().unwrap();
    if first.is_whitespace() || last.is_whitespace() || first == '(' {
        return false;
    }
    if inner.contains(['[', ']', '{', '}']) {
        return false;
    }
    let mut prev = ' ';
    let mut in_ws = false;
    for ch in inner.chars() {
        if ch.is_whitespace() {
            if !in_ws && !matches!(prev, ',' | ';') {
                return false;
            }
            in_ws = true;
        } else {
            in_ws = false;
            prev = ch;
        }
    }
    // A nested paren is only allowed as a group id, e.g. `P(a)`.
    let mut rest = inner;
    while let Some(i) = rest.find('(') {
        let after = &rest[i + 1..];
        let mut chars = after.chars();
        match (chars.next(), chars.next()) {
            (Some(g), Some(')')) if g.is_ascii_lowercase() => rest = &after[2..],
            _ => return false,
        }
    }
    true
}

pub(crate) fn parse_annotation(
    inner: &str,
    span: Span,
    diags: &mut Vec<Diagnostic>,
) -> AnnotationSpec {
    let mut spec = AnnotationSpec { raw: inner.to_string(), ..Default::default() };
    let items: Vec<&str> =
        inner.split([',', ';']).map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        diags.push(Diagnostic::error(DiagnosticCode::EmptyAnnotation, "empty annotation `()`").at(span));
        spec.unknown = true;
        return spec;
    }
    let mut chain: Vec<Option<u32>> = Vec::new();
    for (i, item) in items.iter().enumerate() {
        if let Some(sem) = parse_semantic(item) {
            spec.semantics.push(sem);
            continue;
        }
        if i == 0 {
            match parse_code_item(item) {
                Some((code, alt, group)) => {
                    spec.code = Some(code);
                    spec.alt = alt;
                    spec.group = group;
                }
                None => {
                    diags.push(
                        Diagnostic::error(
                            DiagnosticCode::UnknownCode,
                            format!("unknown component code `{item}`"),
                        )
                        .at(span),
                    );
                    spec.unknown = true;
                }
            }
            continue;
        }
        if *item == "NOT" {
            spec.negated = true;
        } else if let Some(idx) = item.strip_prefix("prop") {
            if idx.is_empty() {
                chain.push(None);
            } else {
                match idx.parse::<u32>() {
                    Ok(n) if n > 0 => chain.push(Some(n)),
                    _ => {
                        diags.push(
                            Diagnostic::error(
                                DiagnosticCode::InvalidPropertyChain,
                                format!("property index must be a positive number in `{item}`"),
                            )
                            .at(span),
                        );
                        chain.push(Some(1));
                    }
                }
            }
        } else {
            diags.push(
                Diagnostic::error(DiagnosticCode::UnknownCode, format!("unknown modifier `{item}`"))
                    .at(span),
            );
            spec.unknown = true;
        }
    }
    if !chain.is_empty() {
        if chain.len() > 1 && chain.iter().any(Option::is_none) {
            diags.push(
                Diagnostic::error(
                    DiagnosticCode::InvalidPropertyChain,
                    "nested property chains need an index at every level",
                )
                .at(span),
            );
        }
        spec.chain = Some(chain.iter().flatten().copied().collect());
    }
    if spec.code.is_none() && !spec.unknown && (spec.chain.is_some() || spec.negated) {
        diags.push(
            Diagnostic::error(DiagnosticCode::UnknownCode, "modifier without a component code")
                .at(span),
        );
        spec.unknown = true;
    }
    spec
}

fn parse_semantic(item: &str) -> Option<SemanticAnnotation> {
    let sep = item.find([':', '='])?;
    let (prefix, rest) = (&item[..sep], &item[sep + 1..]);
    let prefix = AnnotationPrefix::parse(prefix)?;
    if rest.is_empty() {
        return None;
    }
    Some(match prefix {
        AnnotationPrefix::Polref => SemanticAnnotation::polref(rest),
        p => SemanticAnnotation::new(p, rest),
    })
}

/// `CODE`, `CODE(g)`, `CODE/ALT`, `CODE(g)/ALT` or `CODE/ALT(g)`.
fn parse_code_item(item: &str) -> Option<(ComponentCode, Option<ComponentCode>, Option<char>)> {
    let mut group = None;
    let mut codes = Vec::new();
    for part in item.split('/') {
        let (name, g) = match part.find('(') {
            Some(i) => {
                let g = part[i + 1..].strip_suffix(')')?;
                let mut chars = g.chars();
                let c = chars.next()?;
                if chars.next().is_some() || !c.is_ascii_lowercase() || group.is_some() {
                    return None;
                }
                (&part[..i], Some(c))
            }
            None => (part, None),
        };
        group = group.or(g);
        codes.push(name.parse::<ComponentCode>().ok()?);
    }
    match codes.as_slice() {
        [c] => Some((*c, None, group)),
        [c, alt] if c != alt => Some((*c, Some(*alt), group)),
        _ => None,
    }
}

fn meta_tag(s: &str) -> Option<(MetaTag, usize)> {
    let body = s.strip_prefix('@')?;
    let sep = body.find([':', '='])?;
    let key = &body[..sep];
    let value_len = body[sep + 1..]
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
        .unwrap_or(body.len() - sep - 1);
    let value = &body[sep + 1..sep + 1 + value_len];
    let tag = match key {
        "governance" => MetaTag::Governance(Governance::parse(value)?),
        "consequence" => MetaTag::Consequence(ConsequenceType::parse(value)?),
        _ => return None,
    };
    Some((tag, 1 + sep + 1 + value_len))
}

/// Byte positions of the `OR ELSE` keyword (uppercase, whole words).
fn or_else_positions(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(rel) = text[from..].find("OR") {
        let at = from + rel;
        from = at + 2;
        let before_ok = text[..at].chars().next_back().is_none_or(|c| !c.is_alphanumeric());
        let rest = &text[at + 2..];
        let ws = rest.len() - rest.trim_start().len();
        if !before_ok || ws == 0 || !rest[ws..].starts_with("ELSE") {
            continue;
        }
        let end = at + 2 + ws + 4;
        let after_ok = text[end..].chars().next().is_none_or(|c| !c.is_alphanumeric());
        if after_ok {
            out.push((at, end - at));
            from = end;
        }
    }
    out
}
