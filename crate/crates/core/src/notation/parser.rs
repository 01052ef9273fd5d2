//! Token stream to statement tree.
//!
//! Expression grammar (right-associative `OR ELSE`, one operator per
//! parenthesis level):
//!
//! ```text
//! expr    := combo ("OR ELSE" expr)?
//! combo   := unary ("[AND]" unary)*        -- likewise [OR], [XOR]
//! unary   := "[NOT]" unary | "@key:value" unary | primary
//! primary := "(" expr ")" | atomic
//! ```
//!
//! An operator between two unparenthesized runs is statement-level only when
//! both runs hold the necessary components of a family (Attribute and Aim,
//! or Constituted Entity and Constitutive Function); otherwise it joins
//! components inside one atomic statement.

use crate::diagnostic::{Diagnostic, DiagnosticCode, Span};
use crate::model::{
    AtomicStatement, Component, ComponentCode, Dependence, InstitutionalStatement,
    LogicalOperator, Placement, PropertyNode, SemanticAnnotation, StatementNode,
};

use super::lexer::{lex, AnnotationSpec, MetaTag, Tok, Token};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    pub statement: Option<InstitutionalStatement>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseOutcome {
    pub fn has_errors(&self) -> bool {
        crate::diagnostic::has_errors(&self.diagnostics)
    }

    /// The statement if parsing produced no error diagnostics.
    pub fn into_result(self) -> Result<InstitutionalStatement, Vec<Diagnostic>> {
        match self.statement {
            Some(s) if !self.has_errors() => Ok(s),
            _ => Err(self.diagnostics),
        }
    }
}

/// Parses one atomic statement; every operator is read as component-level.
pub fn parse_statement(text: &str) -> ParseOutcome {
    run(text, Mode::Statement)
}

/// Parses a statement expression with statement-level operators, negation
/// and `OR ELSE`.
pub fn parse_expression(text: &str) -> ParseOutcome {
    run(text, Mode::Expression)
}

fn run(text: &str, mode: Mode) -> ParseOutcome {
    let mut diagnostics = Vec::new();
    let tokens = match lex(text, &mut diagnostics) {
        Ok(t) => t,
        Err(fatal) => {
            diagnostics.push(fatal);
            return ParseOutcome { statement: None, diagnostics };
        }
    };
    let mut p = Parser { toks: &tokens, pos: 0, diags: &mut diagnostics, end: text.len() };
    let statement = match mode {
        Mode::Statement => {
            let s = p.atomic(Mode::Statement);
            p.expect_end();
            s
        }
        _ => p.full_expression(),
    };
    ParseOutcome { statement, diagnostics }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    Statement,
    Expression,
    Group,
}

struct Parser<'t, 'd> {
    toks: &'t [Token],
    pos: usize,
    diags: &'d mut Vec<Diagnostic>,
    end: usize,
}

/// One annotated span (or, inside a group, a bare text member).
#[derive(Debug, Clone)]
struct Elem {
    code: Option<ComponentCode>,
    alt: Option<ComponentCode>,
    group: Option<char>,
    chain: Option<Vec<u32>>,
    negated: bool,
    semantics: Vec<SemanticAnnotation>,
    text: String,
    filler: String,
    inferred: bool,
    op: Option<LogicalOperator>,
    nested: Option<InstitutionalStatement>,
    members: Option<Vec<PropertyNode>>,
    span: Span,
}

impl Elem {
    fn is_head(&self) -> bool {
        self.code.is_some() && self.chain.is_none()
    }
}

#[derive(Default)]
struct Pending {
    text: String,
    filler: String,
    op: Option<(LogicalOperator, Span)>,
    not: bool,
    inferred: Option<String>,
    semantics: Vec<SemanticAnnotation>,
    nested: Option<InstitutionalStatement>,
    group: Option<GroupContent>,
}

enum GroupContent {
    Members(Vec<PropertyNode>),
    Wrapper(Vec<Elem>),
}

impl<'t, 'd> Parser<'t, 'd> {
    fn sub<'s>(&'s mut self, lo: usize, hi: usize) -> Parser<'t, 's> {
        let end = self.toks.get(hi).map_or(self.end, |t| t.span.offset);
        Parser { toks: &self.toks[lo..hi], pos: 0, diags: self.diags, end }
    }

    fn peek(&self) -> Option<&'t Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn span_here(&self) -> Span {
        self.toks.get(self.pos).map_or(Span::new(self.end, 0), |t| t.span)
    }

    fn err(&mut self, code: DiagnosticCode, msg: impl Into<String>, span: Span) {
        self.diags.push(Diagnostic::error(code, msg).at(span));
    }

    fn warn(&mut self, code: DiagnosticCode, msg: impl Into<String>, span: Span) {
        self.diags.push(Diagnostic::warning(code, msg).at(span));
    }

    /// Index of the token closing the paren or brace opened at `i`.
    fn matching(&self, i: usize) -> usize {
        let mut depth = 0usize;
        for (j, t) in self.toks.iter().enumerate().skip(i) {
            match t.tok {
                Tok::LParen | Tok::LBrace => depth += 1,
                Tok::RParen | Tok::RBrace => {
                    depth -= 1;
                    if depth == 0 {
                        return j;
                    }
                }
                _ => {}
            }
        }
        self.toks.len()
    }

    fn is_statement_group(&self, i: usize) -> bool {
        if !matches!(self.toks.get(i).map(|t| &t.tok), Some(Tok::LParen)) {
            return false;
        }
        let close = self.matching(i);
        !matches!(self.toks.get(close + 1).map(|t| &t.tok), Some(Tok::Annot(_)))
    }

    fn skip_punct(&mut self) {
        while let Some(Tok::Text(t)) = self.peek() {
            if t.chars().all(|c| c.is_whitespace() || is_punct(c)) {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn expect_end(&mut self) {
        self.skip_punct();
        if self.pos < self.toks.len() {
            let span = self.span_here();
            self.err(DiagnosticCode::UnexpectedToken, "unexpected input after statement", span);
        }
    }

    fn full_expression(&mut self) -> Option<InstitutionalStatement> {
        let s = self.expression();
        self.expect_end();
        s
    }

    // ---------------------------------------------------------------------
    // statement level

    fn expression(&mut self) -> Option<InstitutionalStatement> {
        self.skip_punct();
        if let Some(Tok::OrElse) = self.peek() {
            let span = self.span_here();
            self.err(DiagnosticCode::DanglingOrElse, "`OR ELSE` without a monitored statement", span);
            self.pos += 1;
        }
        let left = self.combination()?;
        self.skip_punct();
        if let Some(Tok::OrElse) = self.peek() {
            let span = self.span_here();
            self.pos += 1;
            self.skip_punct();
            if self.pos >= self.toks.len() {
                self.err(DiagnosticCode::DanglingOrElse, "`OR ELSE` without a consequential statement", span);
                return Some(left);
            }
            let right = self.expression()?;
            return Some(InstitutionalStatement::or_else(left, right));
        }
        Some(left)
    }

    fn combination(&mut self) -> Option<InstitutionalStatement> {
        let first = self.unary()?;
        let mut operands = vec![first];
        let mut op: Option<LogicalOperator> = None;
        loop {
            self.skip_punct();
            let Some(Tok::Op(o)) = self.peek() else { break };
            let (o, span) = (*o, self.span_here());
            self.pos += 1;
            match op {
                Some(prev) if prev != o => {
                    self.err(
                        DiagnosticCode::MixedOperatorsWithoutParens,
                        format!("[{prev}] and [{o}] mixed without parentheses"),
                        span,
                    );
                    let lhs = InstitutionalStatement::combination(prev, std::mem::take(&mut operands));
                    operands.push(lhs);
                }
                _ => {}
            }
            op = Some(o);
            operands.push(self.unary()?);
        }
        match op {
            Some(o) if operands.len() > 1 => Some(InstitutionalStatement::combination(o, operands)),
            _ => operands.pop(),
        }
    }

    fn unary(&mut self) -> Option<InstitutionalStatement> {
        self.skip_punct();
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                let inner = self.unary()?;
                Some(InstitutionalStatement::negation(inner))
            }
            Some(Tok::Meta(tag)) => {
                let tag = *tag;
                self.pos += 1;
                let mut inner = self.unary()?;
                match tag {
                    MetaTag::Governance(g) => inner.governance = Some(g),
                    MetaTag::Consequence(c) => inner.consequence_type = Some(c),
                }
                Some(inner)
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Option<InstitutionalStatement> {
        let span = self.span_here();
        match self.peek() {
            None => {
                self.err(DiagnosticCode::EmptyStatement, "expected a statement", span);
                None
            }
            Some(Tok::LParen) if self.is_statement_group(self.pos) => {
                let close = self.matching(self.pos);
                let lo = self.pos + 1;
                self.pos = close + 1;
                self.sub(lo, close).full_expression()
            }
            Some(Tok::Text(_) | Tok::Annot(_) | Tok::Inferred(_) | Tok::LParen | Tok::LBrace) => {
                self.atomic(Mode::Expression)
            }
            Some(_) => {
                self.err(DiagnosticCode::UnexpectedToken, "expected a statement", span);
                None
            }
        }
    }

    /// Decides whether the operator at `at` joins statements rather than
    /// components.
    fn is_statement_operator(&self, at: usize, elems: &[Elem]) -> bool {
        let mut j = at + 1;
        while let Some(Tok::Text(t)) = self.toks.get(j).map(|t| &t.tok) {
            if t.trim().is_empty() {
                j += 1;
            } else {
                break;
            }
        }
        match self.toks.get(j).map(|t| &t.tok) {
            Some(Tok::Not | Tok::Meta(_)) => return true,
            Some(Tok::LParen) if self.is_statement_group(j) => return true,
            _ => {}
        }
        let left: Vec<ComponentCode> = elems
            .iter()
            .filter(|e| e.is_head())
            .flat_map(|e| e.code.into_iter().chain(e.alt))
            .collect();
        if !holds_necessary(&left) {
            return false;
        }
        let mut right = Vec::new();
        while j < self.toks.len() {
            match &self.toks[j].tok {
                Tok::LParen | Tok::LBrace => j = self.matching(j) + 1,
                Tok::Op(_) | Tok::OrElse | Tok::Meta(_) | Tok::Not => break,
                Tok::Annot(spec) => {
                    if spec.chain.is_none() {
                        right.extend(spec.code.into_iter().chain(spec.alt));
                    }
                    j += 1;
                }
                _ => j += 1,
            }
        }
        holds_necessary(&right)
    }

    // ---------------------------------------------------------------------
    // component level

    fn atomic(&mut self, mode: Mode) -> Option<InstitutionalStatement> {
        let start = self.span_here();
        let (elems, trailing) = self.collect(mode);
        let mut diags = Vec::new();
        let atomic = assemble_atomic(elems, trailing, &mut diags);
        self.diags.extend(diags);
        if atomic.explicit().next().is_none() {
            self.err(DiagnosticCode::EmptyStatement, "statement has no coded components", start);
            return None;
        }
        Some(StatementNode::Atomic(atomic).into())
    }

    /// Gathers annotated spans until a statement-level boundary.
    fn collect(&mut self, mode: Mode) -> (Vec<Elem>, String) {
        let mut elems: Vec<Elem> = Vec::new();
        let mut p = Pending::default();
        while let Some(tok) = self.peek() {
            let span = self.span_here();
            match tok {
                Tok::Text(t) => {
                    if p.nested.is_some() || p.group.is_some() {
                        break;
                    }
                    p.text.push_str(t);
                    p.text.push(' ');
                    self.pos += 1;
                }
                Tok::Inferred(t) => {
                    move_text_to_filler(&mut p);
                    p.inferred = Some(t.clone());
                    self.pos += 1;
                }
                Tok::Annot(spec) => {
                    self.pos += 1;
                    self.on_annotation(spec, span, &mut p, &mut elems, mode);
                }
                Tok::Op(o) => {
                    if mode == Mode::Expression && self.is_statement_operator(self.pos, &elems) {
                        break;
                    }
                    if mode == Mode::Group && !p.text.trim().is_empty() {
                        elems.push(plain_member(&mut p, span));
                    } else {
                        move_text_to_filler(&mut p);
                    }
                    if let Some((_, old)) = p.op {
                        self.warn(DiagnosticCode::DanglingOperator, "operator has no operand", old);
                    }
                    p.op = Some((*o, span));
                    self.pos += 1;
                }
                Tok::Not => {
                    move_text_to_filler(&mut p);
                    p.not = true;
                    self.pos += 1;
                }
                Tok::LBrace => {
                    let close = self.matching(self.pos);
                    let lo = self.pos + 1;
                    self.pos = close + 1;
                    let nested = self.sub(lo, close).full_expression();
                    if !matches!(self.peek(), Some(Tok::Annot(s)) if s.code.is_some()) {
                        self.err(
                            DiagnosticCode::UnexpectedToken,
                            "a nested statement must be followed by its component annotation",
                            span,
                        );
                        continue;
                    }
                    p.nested = nested;
                }
                Tok::LParen => {
                    if self.is_statement_group(self.pos) {
                        if mode != Mode::Expression {
                            self.err(
                                DiagnosticCode::UnexpectedToken,
                                "parenthesized statement inside an atomic statement",
                                span,
                            );
                            self.pos = self.matching(self.pos) + 1;
                            continue;
                        }
                        break;
                    }
                    let close = self.matching(self.pos);
                    let outer = match self.toks.get(close + 1).map(|t| &t.tok) {
                        Some(Tok::Annot(s)) => s.code,
                        _ => None,
                    };
                    let lo = self.pos + 1;
                    self.pos = close + 1;
                    let mut sub = self.sub(lo, close);
                    let (inner, rest) = sub.collect(Mode::Group);
                    if !rest.trim().is_empty() {
                        let tail = Span::new(self.toks[close].span.offset, 1);
                        self.warn(DiagnosticCode::UnexpectedToken, "unattached text in group", tail);
                    }
                    let mut diags = Vec::new();
                    p.group = Some(assemble_group(inner, outer, span, &mut diags));
                    self.diags.extend(diags);
                }
                Tok::OrElse | Tok::Meta(_) | Tok::RParen | Tok::RBrace => {
                    if mode != Mode::Expression {
                        self.err(DiagnosticCode::UnexpectedToken, "unexpected token in statement", span);
                        self.pos += 1;
                        continue;
                    }
                    break;
                }
            }
        }
        if let Some((_, span)) = p.op {
            self.warn(DiagnosticCode::DanglingOperator, "operator has no operand", span);
        }
        if mode == Mode::Group && !p.text.trim().is_empty() {
            let span = self.span_here();
            elems.push(plain_member(&mut p, span));
        }
        let mut trailing = std::mem::take(&mut p.filler);
        if let Some(inf) = p.inferred.take() {
            trailing.push_str(&format!(" [{inf}]"));
        }
        trailing.push(' ');
        trailing.push_str(&p.text);
        (elems, normalize(&trailing))
    }

    fn on_annotation(
        &mut self,
        spec: &AnnotationSpec,
        span: Span,
        p: &mut Pending,
        elems: &mut Vec<Elem>,
        mode: Mode,
    ) {
        if spec.unknown {
            // Unknown codes degrade to plain filler so no text is lost.
            move_text_to_filler(p);
            if let Some(inf) = p.inferred.take() {
                p.filler.push_str(&format!(" {inf}"));
            }
            return;
        }
        let Some(code) = spec.code else {
            // Code-less tag: applies to the span that continues past it.
            p.semantics.extend(spec.semantics.iter().cloned());
            return;
        };
        let (lead, body) = split_lead(&p.text);
        let mut filler = normalize(&format!("{} {}", p.filler, lead));
        let (text, inferred) = match p.inferred.take() {
            Some(inf) => {
                if !body.is_empty() {
                    filler = normalize(&format!("{filler} {body}"));
                }
                (normalize(&inf), true)
            }
            None => (body, false),
        };
        let mut semantics = std::mem::take(&mut p.semantics);
        semantics.extend(spec.semantics.iter().cloned());
        let op = p.op.take().map(|(o, _)| o);
        let negated = spec.negated || std::mem::take(&mut p.not);
        p.text.clear();
        p.filler.clear();
        let nested = p.nested.take();
        let group = p.group.take();
        if text.is_empty() && !inferred && nested.is_none() && group.is_none() {
            self.err(DiagnosticCode::EmptyAnnotation, "annotation has no text to code", span);
            return;
        }
        if spec.group.is_some() && mode != Mode::Group {
            self.err(
                DiagnosticCode::MisplacedGroupId,
                "group ids are only valid inside a compound group",
                span,
            );
        }
        let group_id = if mode == Mode::Group { spec.group } else { None };
        let mut elem = Elem {
            code: Some(code),
            alt: spec.alt,
            group: group_id,
            chain: spec.chain.clone(),
            negated,
            semantics,
            text,
            filler,
            inferred,
            op,
            nested,
            members: None,
            span,
        };
        match group {
            Some(GroupContent::Members(members)) => {
                elem.members = Some(members);
                elems.push(elem);
            }
            Some(GroupContent::Wrapper(mut inner)) => {
                // `( phrase ) (P)`: the outer annotation only restates the
                // code, so the inner spans become the component directly.
                if let Some(first) = inner.first_mut() {
                    let prefix = [elem.filler.as_str(), elem.text.as_str(), first.filler.as_str()];
                    first.filler = normalize(&prefix.join(" "));
                    first.op = first.op.or(elem.op);
                }
                if let Some(head) = inner.iter_mut().find(|e| e.is_head()) {
                    if head.code != elem.code {
                        self.err(
                            DiagnosticCode::GroupCodeMismatch,
                            "grouped phrase is coded differently from its group",
                            span,
                        );
                    }
                    head.alt = head.alt.or(elem.alt);
                    head.negated |= elem.negated;
                    head.semantics.extend(elem.semantics);
                }
                elems.extend(inner);
            }
            None => elems.push(elem),
        }
    }
}

fn holds_necessary(codes: &[ComponentCode]) -> bool {
    let has = |c| codes.contains(&c);
    (has(ComponentCode::A) && has(ComponentCode::I)) || (has(ComponentCode::E) && has(ComponentCode::F))
}

fn plain_member(p: &mut Pending, span: Span) -> Elem {
    let (lead, body) = split_lead(&p.text);
    let elem = Elem {
        code: None,
        alt: None,
        group: None,
        chain: None,
        negated: false,
        semantics: Vec::new(),
        text: body,
        filler: normalize(&format!("{} {}", p.filler, lead)),
        inferred: false,
        op: p.op.take().map(|(o, _)| o),
        nested: None,
        members: None,
        span,
    };
    p.text.clear();
    p.filler.clear();
    elem
}

fn move_text_to_filler(p: &mut Pending) {
    if !p.text.trim().is_empty() {
        p.filler = normalize(&format!("{} {}", p.filler, p.text));
    }
    p.text.clear();
}

pub(crate) fn is_punct(c: char) -> bool {
    matches!(c, ',' | ';' | ':' | '.' | '!' | '?')
}

pub(crate) fn normalize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Splits leading punctuation (filler) from the coded text.
pub(crate) fn split_lead(s: &str) -> (String, String) {
    let t = s.trim_start();
    let cut = t.find(|c: char| !(is_punct(c) || c.is_whitespace())).unwrap_or(t.len());
    let lead: String = t[..cut].chars().filter(|c| !c.is_whitespace()).collect();
    (lead, normalize(&t[cut..]))
}

// -------------------------------------------------------------------------
// assembly

fn assemble_atomic(elems: Vec<Elem>, trailing: String, diags: &mut Vec<Diagnostic>) -> AtomicStatement {
    let heads: Vec<usize> = (0..elems.len()).filter(|&i| elems[i].is_head()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; elems.len()];
    // Codes whose current run of properties attaches forward.
    let mut forward_run: Vec<ComponentCode> = Vec::new();
    for i in 0..elems.len() {
        let Some(code) = elems[i].code else { continue };
        if elems[i].is_head() {
            forward_run.retain(|c| *c != code);
            continue;
        }
        let prev = heads.iter().rev().find(|&&h| h < i && elems[h].code == Some(code)).copied();
        let next = heads.iter().find(|&&h| h > i && elems[h].code == Some(code)).copied();
        // A property introduced by an operator, or following one that was,
        // belongs to the next head; otherwise it stays with the previous one.
        let forward = elems[i].op.is_some() || forward_run.contains(&code);
        owner[i] = match (prev, next) {
            (Some(p), Some(n)) => {
                if forward && !forward_run.contains(&code) {
                    forward_run.push(code);
                }
                Some(if forward { n } else { p })
            }
            (p, n) => p.or(n),
        };
        if owner[i].is_none() {
            diags.push(
                Diagnostic::error(
                    DiagnosticCode::OrphanProperty,
                    format!("property of {code} has no component to attach to"),
                )
                .at(elems[i].span),
            );
        }
    }

    let mut components = Vec::new();
    let mut orphan_filler = String::new();
    let mut seen: Vec<ComponentCode> = Vec::new();
    for (pos, e) in elems.iter().enumerate() {
        if !e.is_head() {
            if e.code.is_some() && owner[pos].is_none() {
                orphan_filler = normalize(&format!("{orphan_filler} {} {}", e.filler, e.text));
            }
            continue;
        }
        let props: Vec<(usize, &Elem)> =
            (0..elems.len()).filter(|&i| owner[i] == Some(pos)).map(|i| (i, &elems[i])).collect();
        let mut head = head_node(e, pos, &props, diags);
        if !orphan_filler.is_empty() {
            head.filler = normalize(&format!("{orphan_filler} {}", head.filler));
            orphan_filler.clear();
        }
        let code = e.code.unwrap();
        let mut comp = Component::new(code, head.text);
        comp.alt_code = e.alt;
        comp.filler = head.filler;
        comp.inferred = e.inferred;
        comp.negated = e.negated;
        comp.nested = e.nested.clone().map(Box::new);
        comp.annotations = e.semantics.clone();
        comp.operator = head.sibling_operator;
        let (before, after): (Vec<_>, Vec<_>) =
            head.children.into_iter().partition(|p| p.placement == Placement::Before);
        comp.properties = before;
        comp.properties.extend(e.members.clone().unwrap_or_default());
        comp.properties.extend(after);
        if seen.contains(&code) {
            comp.operator = comp.operator.or(Some(LogicalOperator::And));
        } else {
            if comp.operator.is_some() {
                diags.push(
                    Diagnostic::warning(
                        DiagnosticCode::DanglingOperator,
                        format!("operator before the first {code} has nothing to join"),
                    )
                    .at(e.span),
                );
                comp.operator = None;
            }
            seen.push(code);
        }
        components.push(comp);
    }
    let trailing = normalize(&format!("{orphan_filler} {trailing}"));
    let mut atomic = AtomicStatement { components, trailing };
    atomic.fill_implied_context();
    atomic
}

/// Builds a head (component or group member) with its property tree.
/// The returned node's `children` are the top-level properties.
fn head_node(head: &Elem, head_pos: usize, props: &[(usize, &Elem)], diags: &mut Vec<Diagnostic>) -> PropertyNode {
    let n = props.len();
    let paths: Vec<Vec<u32>> = props.iter().map(|(_, e)| e.chain.clone().unwrap_or_default()).collect();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if paths[i].len() < 2 {
            continue;
        }
        let want = &paths[i][..paths[i].len() - 1];
        let best = (0..n)
            .filter(|&j| j != i && paths[j] == want)
            .min_by_key(|&j| props[j].0.abs_diff(props[i].0));
        match best {
            Some(j) => parent[i] = Some(j),
            None => diags.push(
                Diagnostic::warning(
                    DiagnosticCode::OrphanProperty,
                    "nested property has no parent property; attached to the component",
                )
                .at(props[i].1.span),
            ),
        }
    }
    let mut sibling_op: Vec<Option<LogicalOperator>> = vec![None; n];
    let mut loose_op: Vec<Option<LogicalOperator>> = vec![None; n];
    for i in 0..n {
        let Some(op) = props[i].1.op else { continue };
        let has_prior_sibling = (0..n).any(|j| props[j].0 < props[i].0 && parent[j] == parent[i] && paths[j] == paths[i]);
        if has_prior_sibling {
            sibling_op[i] = Some(op);
        } else {
            loose_op[i] = Some(op);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        idx: Option<usize>,
        self_pos: usize,
        props: &[(usize, &Elem)],
        parent: &[Option<usize>],
        paths: &[Vec<u32>],
        sibling_op: &[Option<LogicalOperator>],
        loose_op: &mut [Option<LogicalOperator>],
        diags: &mut Vec<Diagnostic>,
    ) -> Vec<PropertyNode> {
        let mut kids: Vec<usize> = (0..props.len()).filter(|&k| parent[k] == idx).collect();
        kids.sort_by_key(|&k| (props[k].0 > self_pos, props[k].0));
        kids.into_iter()
            .map(|k| {
                let (pos, e) = props[k];
                let mut node = elem_to_property(e, Dependence::Dependent, paths[k].clone());
                node.placement = if pos < self_pos { Placement::Before } else { Placement::After };
                node.sibling_operator = sibling_op[k];
                node.children = build(Some(k), pos, props, parent, paths, sibling_op, loose_op, diags);
                if let Some(op) = loose_op[k].take() {
                    if node.placement == Placement::Before {
                        // Hoisted to the parent below via the first-child rule.
                        node.sibling_operator = Some(op);
                    } else {
                        diags.push(
                            Diagnostic::warning(DiagnosticCode::DanglingOperator, "operator has no operand")
                                .at(e.span),
                        );
                    }
                }
                hoist_leading(&mut node);
                node
            })
            .collect()
    }

    let mut node = elem_to_property(head, Dependence::Independent, Vec::new());
    node.sibling_operator = head.op;
    node.children = build(None, head_pos, props, &parent, &paths, &sibling_op, &mut loose_op, diags);
    hoist_leading(&mut node);
    node
}

/// The earliest property written before a node opens that node's span, so
/// its filler and introducing operator belong to the node itself.
fn hoist_leading(node: &mut PropertyNode) {
    let Some(first) = node.children.first_mut() else { return };
    if first.placement != Placement::Before {
        return;
    }
    let filler = std::mem::take(&mut first.filler);
    let op = first.sibling_operator.take();
    node.filler = normalize(&format!("{filler} {}", node.filler));
    if node.sibling_operator.is_none() {
        node.sibling_operator = op;
    }
}

fn elem_to_property(e: &Elem, dependence: Dependence, index_path: Vec<u32>) -> PropertyNode {
    PropertyNode {
        text: e.text.clone(),
        filler: e.filler.clone(),
        dependence,
        index_path,
        group_id: None,
        sibling_operator: None,
        placement: Placement::Before,
        inferred: e.inferred,
        nested: e.nested.clone().map(Box::new),
        annotations: e.semantics.clone(),
        children: Vec::new(),
    }
}

fn assemble_group(
    elems: Vec<Elem>,
    outer: Option<ComponentCode>,
    span: Span,
    diags: &mut Vec<Diagnostic>,
) -> GroupContent {
    let annotated: Vec<&Elem> = elems.iter().filter(|e| e.code.is_some()).collect();
    let heads = annotated.iter().filter(|e| e.is_head()).count();
    let plain = elems.len() - annotated.len();
    if plain == 0 && heads == 1 && annotated.iter().all(|e| e.group.is_none()) {
        return GroupContent::Wrapper(elems);
    }
    for e in &annotated {
        if e.code != outer {
            diags.push(
                Diagnostic::error(
                    DiagnosticCode::GroupCodeMismatch,
                    "group member is coded differently from its group",
                )
                .at(e.span),
            );
        }
    }
    // Member heads: plain texts and annotated heads, in order.
    let member_heads: Vec<usize> =
        (0..elems.len()).filter(|&i| elems[i].code.is_none() || elems[i].is_head()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; elems.len()];
    for i in 0..elems.len() {
        let e = &elems[i];
        if e.code.is_none() || e.is_head() {
            continue;
        }
        let same = |h: &usize| elems[*h].code.is_some() && elems[*h].group == e.group;
        owner[i] = match e.group {
            Some(_) => member_heads
                .iter()
                .filter(|h| same(h))
                .min_by_key(|&&h| h.abs_diff(i))
                .copied(),
            None => {
                let prev = member_heads.iter().rev().find(|&&h| h < i && same(&h)).copied();
                let next = member_heads.iter().find(|&&h| h > i && same(&h)).copied();
                match (prev, next) {
                    (Some(p), Some(n)) => Some(if e.op.is_some() { n } else { p }),
                    (p, n) => p.or(n),
                }
            }
        };
        if owner[i].is_none() {
            diags.push(
                Diagnostic::error(DiagnosticCode::OrphanProperty, "group property has no member")
                    .at(e.span),
            );
        }
    }
    let mut members = Vec::new();
    let mut op_seen: Option<LogicalOperator> = None;
    for &h in &member_heads {
        let e = &elems[h];
        let mut node = if e.code.is_none() {
            let mut m = PropertyNode::member(e.text.clone(), None);
            m.filler = e.filler.clone();
            m.sibling_operator = e.op;
            m
        } else {
            let props: Vec<(usize, &Elem)> =
                (0..elems.len()).filter(|&i| owner[i] == Some(h)).map(|i| (i, &elems[i])).collect();
            let mut m = head_node(e, h, &props, diags);
            m.group_id = e.group;
            m
        };
        node.dependence = Dependence::Independent;
        node.placement = Placement::Before;
        if members.is_empty() {
            node.sibling_operator = None;
        }
        if let Some(op) = node.sibling_operator {
            match op_seen {
                Some(prev) if prev != op => diags.push(
                    Diagnostic::error(
                        DiagnosticCode::MixedOperatorsWithoutParens,
                        format!("[{prev}] and [{op}] mixed inside one group"),
                    )
                    .at(span),
                ),
                _ => op_seen = Some(op),
            }
        }
        members.push(node);
    }
    GroupContent::Members(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ComponentCode::*;

    fn atomic(src: &str) -> AtomicStatement {
        let out = parse_statement(src);
        assert!(!out.has_errors(), "{:?}", out.diagnostics);
        out.statement.unwrap().as_atomic().unwrap().clone()
    }

    fn comp(a: &AtomicStatement, code: ComponentCode) -> &Component {
        a.components.iter().find(|c| c.code == code).unwrap()
    }

    #[test]
    fn simple_regulative() {
        let a = atomic("Certified (A,prop) farmers (A) must (D) adhere (I) to organic farming practices (Bdir) following their certification (Cac).");
        let attr = comp(&a, A);
        assert_eq!(attr.text, "farmers");
        assert_eq!(attr.properties.len(), 1);
        assert_eq!(attr.properties[0].text, "Certified");
        assert_eq!(attr.properties[0].placement, Placement::Before);
        assert_eq!(comp(&a, Bdir).text, "to organic farming practices");
        assert_eq!(comp(&a, Cac).text, "following their certification");
        assert!(comp(&a, Cex).implied);
        assert_eq!(a.trailing, ".");
    }

    #[test]
    fn compound_group_members() {
        let a = atomic("The Committee (E) shall (M) consist of (F) a ( President (P(a)) [AND] Secretary (P(b)) [AND] qualified (P(c),prop1) Treasurer (P(c)) ) (P) appointed by the public (P,prop).");
        let p = comp(&a, P);
        assert_eq!(p.text, "a");
        let members: Vec<_> = p.properties.iter().filter(|n| n.dependence == Dependence::Independent).collect();
        assert_eq!(members.len(), 3);
        assert_eq!(members[2].group_id, Some('c'));
        assert_eq!(members[2].children[0].text, "qualified");
        assert_eq!(members[2].children[0].index_path, vec![1]);
        assert_eq!(members[1].sibling_operator, Some(LogicalOperator::And));
        let shared: Vec<_> = p.properties.iter().filter(|n| n.dependence == Dependence::Dependent).collect();
        assert_eq!(shared[0].text, "appointed by the public");
        assert_eq!(shared[0].placement, Placement::After);
    }

    #[test]
    fn wrapped_phrase_flattens() {
        let a = atomic("( A majority (P,prop1,prop1) of the members (P,prop1) of the Council (P) ) (P) shall (M) constitute (F) a quorum (E).");
        let p = comp(&a, P);
        assert_eq!(p.text, "of the Council");
        assert_eq!(p.properties.len(), 1);
        assert_eq!(p.properties[0].text, "of the members");
        assert_eq!(p.properties[0].children[0].text, "A majority");
        assert_eq!(p.properties[0].children[0].index_path, vec![1, 1]);
    }

    #[test]
    fn component_alternatives() {
        let a = atomic("Organic farmers (A) must (D) commit to (I) organic farming standards (Bdir) [AND] accommodate (I) regular reviews (Bdir).");
        let aims: Vec<_> = a.components.iter().filter(|c| c.code == I).collect();
        assert_eq!(aims.len(), 2);
        assert_eq!(aims[0].operator, None);
        assert_eq!(aims[1].operator, Some(LogicalOperator::And));
        let objs: Vec<_> = a.components.iter().filter(|c| c.code == Bdir).collect();
        assert_eq!(objs[1].operator, Some(LogicalOperator::And));
    }

    #[test]
    fn codeless_polref_joins_next_span() {
        let a = atomic("The Council (E) shall (M) have (F) the power (P) to establish standards pursuant to Section 16-107.5 (polref=Section/16-107.5) of the Act (P,prop).");
        let prop = &comp(&a, P).properties[0];
        assert_eq!(prop.text, "to establish standards pursuant to Section 16-107.5 of the Act");
        assert_eq!(prop.annotations[0].value.as_deref(), Some("Section/16-107.5"));
    }

    #[test]
    fn unknown_code_recovers() {
        let out = parse_statement("farmers (A) must (D) comply (Attr) with rules (I)");
        assert!(out.diagnostics.iter().any(|d| d.code == DiagnosticCode::UnknownCode));
        let s = out.statement.unwrap();
        let a = s.as_atomic().unwrap();
        assert_eq!(comp(a, I).filler, "comply");
        assert_eq!(comp(a, I).text, "with rules");
    }

    #[test]
    fn statement_level_operators() {
        let src = "( Organic farmers (A) must (D) comply (I) [AND] Organic farmers (A) must (D) report (I) ) [XOR] [NOT] ( Organic farmers (A) must (D) sell (I) )";
        let out = parse_expression(src);
        assert!(!out.has_errors(), "{:?}", out.diagnostics);
        let StatementNode::Combination { operator, operands } = out.statement.unwrap().node else { panic!() };
        assert_eq!(operator, LogicalOperator::Xor);
        assert!(matches!(operands[0].node, StatementNode::Combination { ref operands, .. } if operands.len() == 2));
        assert!(matches!(operands[1].node, StatementNode::Negation { .. }));
    }

    #[test]
    fn or_else_is_right_associative() {
        let s = parse_expression("x (A) must (D) a (I) OR ELSE y (A) must (D) b (I) OR ELSE z (A) must (D) c (I)")
            .into_result()
            .unwrap();
        let StatementNode::OrElse { consequential, .. } = s.node else { panic!() };
        assert!(matches!(consequential.node, StatementNode::OrElse { .. }));
    }

    #[test]
    fn delimiter_and_operator_errors() {
        let codes = |s: &str| parse_expression(s).diagnostics.into_iter().map(|d| d.code).collect::<Vec<_>>();
        assert!(codes("x (A) must (D) { a (I)").contains(&DiagnosticCode::UnbalancedDelimiter));
        assert!(codes("x (A) must (D) a (I) OR ELSE").contains(&DiagnosticCode::DanglingOrElse));
        assert!(codes("( x (A) a (I) ) [AND] ( y (A) b (I) ) [OR] ( z (A) c (I) )")
            .contains(&DiagnosticCode::MixedOperatorsWithoutParens));
        assert!(codes("x (A) must () a (I)").contains(&DiagnosticCode::EmptyAnnotation));
    }

    #[test]
    fn nested_component_statement() {
        let a = atomic("Organic farmers (A) may (D) obtain (I) certification (Bdir) under the condition that { organic farmers (A) apply (I) for certification (Bdir) } (Cac).");
        let cac = comp(&a, Cac);
        assert_eq!(cac.text, "under the condition that");
        let inner = cac.nested.as_ref().unwrap();
        assert_eq!(inner.as_atomic().unwrap().components[0].text, "organic farmers");
    }
}
