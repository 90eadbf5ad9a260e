//! Line-oriented parser with declare-before-use resolution.
//!
//! Each line is parsed on its own, so a bad statement costs one diagnostic
//! and parsing resumes on the next line. A statement that fails does not
//! declare anything, which can cause follow-on diagnostics for later uses.

use std::collections::{BTreeMap, BTreeSet};

use super::syntax::{Diagnostic, Query, Script, Severity, Statement, StatementKind};
use crate::doxastic::ModalStatus;
use crate::store::Store;
use crate::testimony::nested_context_name;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

impl Token {
    fn text(&self) -> String {
        match &self.tok {
            Tok::Word(w) => w.clone(),
            Tok::Punct(c) => c.to_string(),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '@' | '-')
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(is_word_char)
}

fn error(
    line: usize,
    column: usize,
    message: impl Into<String>,
    token: impl Into<String>,
) -> Diagnostic {
    Diagnostic {
        line,
        column,
        severity: Severity::Error,
        message: message.into(),
        token: token.into(),
    }
}

fn lex(line: usize, text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        if matches!(c, '{' | '}' | '(' | ')' | ',' | '=') {
            tokens.push(Token {
                tok: Tok::Punct(c),
                col,
            });
            i += 1;
        } else if is_word_char(c) {
            let start = i;
            while i < chars.len() && is_word_char(chars[i]) {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Word(chars[start..i].iter().collect()),
                col,
            });
        } else {
            return Err(error(line, col, "unexpected character", c.to_string()));
        }
    }
    Ok(tokens)
}

struct Cursor<'a> {
    line: usize,
    tokens: &'a [Token],
    pos: usize,
    end_col: usize,
}

/// A word with the column it starts at.
type Spanned = (String, usize);

impl Cursor<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, String) {
        match self.peek() {
            Some(t) => (t.col, t.text()),
            None => (self.end_col, String::new()),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, Diagnostic> {
        let (col, tok) = self.here();
        Err(error(self.line, col, message, tok))
    }

    fn word(&mut self, what: &str) -> Result<Spanned, Diagnostic> {
        match self.peek() {
            Some(Token {
                tok: Tok::Word(w),
                col,
            }) => {
                let out = (w.clone(), *col);
                self.pos += 1;
                Ok(out)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<Spanned, Diagnostic> {
        let (w, col) = self.word(what)?;
        if !is_identifier(&w) {
            return Err(error(self.line, col, format!("invalid {what}"), w));
        }
        Ok((w, col))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(Token {
                tok: Tok::Word(w), ..
            }) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Word(w), .. }) if w == kw)
    }

    fn punct(&mut self, c: char) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(Token {
                tok: Tok::Punct(p), ..
            }) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{c}`")),
        }
    }

    fn at_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Punct(p), .. }) if *p == c)
    }

    fn status(&mut self) -> Result<ModalStatus, Diagnostic> {
        let (w, col) = self.word("a status")?;
        w.parse()
            .map_err(|msg: String| error(self.line, col, msg, w.clone()))
    }

    fn finish(&self) -> Result<(), Diagnostic> {
        if self.pos < self.tokens.len() {
            self.fail("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    /// `{ word... }`
    fn braced_words(&mut self, what: &str) -> Result<Vec<Spanned>, Diagnostic> {
        self.punct('{')?;
        let mut out = Vec::new();
        while !self.at_punct('}') {
            out.push(self.word(what)?);
        }
        self.punct('}')?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Default)]
struct StageSim {
    epoch: u64,
}

/// What has been declared so far. Seeded from a store when parsing lines
/// against existing state.
#[derive(Debug, Clone)]
pub struct Resolver {
    worlds: BTreeMap<String, BTreeSet<String>>,
    individuals: BTreeSet<(String, String)>,
    possibilities: BTreeSet<String>,
    contexts: BTreeSet<String>,
    /// (context, speaker, now) triples that already have a nested context.
    nested: BTreeSet<(String, String, String)>,
    stages: BTreeMap<String, StageSim>,
    stage: String,
    epoch: u64,
}

impl Default for Resolver {
    fn default() -> Self {
        Resolver {
            worlds: BTreeMap::new(),
            individuals: BTreeSet::new(),
            possibilities: BTreeSet::new(),
            contexts: BTreeSet::new(),
            nested: BTreeSet::new(),
            stages: BTreeMap::from([("root".to_string(), StageSim::default())]),
            stage: "root".to_string(),
            epoch: 0,
        }
    }
}

impl Resolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_store(store: &Store) -> Self {
        let model = &store.universe.model;
        let mut r = Resolver::new();
        for w in model.worlds() {
            r.worlds
                .insert(w.name.clone(), w.atom_labels().iter().cloned().collect());
            for (name, _) in model.names_in(w.id) {
                r.individuals.insert((w.name.clone(), name.to_string()));
            }
        }
        r.possibilities = store
            .universe
            .possibilities()
            .map(|p| p.name.clone())
            .collect();
        let beliefs = store.beliefs();
        r.contexts = beliefs.contexts().map(|c| c.name.clone()).collect();
        for (&(ctx, speaker, _), &nested) in &beliefs.nested {
            if let Ok(n) = beliefs.context(nested) {
                r.nested.insert((
                    beliefs.context_name(ctx).to_string(),
                    store.universe.name(speaker).to_string(),
                    store.universe.name(n.now).to_string(),
                ));
            }
        }
        r.stages = store
            .lineage()
            .stages()
            .into_iter()
            .map(|s| {
                let epoch = s.end.map_or(store.epoch().0, |e| e.0.saturating_sub(1));
                (s.id.to_string(), StageSim { epoch })
            })
            .collect();
        r.stage = store.lineage().tip().id.to_string();
        r.epoch = store.epoch().0;
        r
    }

    fn need_world(&self, line: usize, (w, col): &Spanned, out: &mut Vec<Diagnostic>) -> bool {
        if self.worlds.contains_key(w) {
            true
        } else {
            out.push(error(
                line,
                *col,
                format!("undeclared world `{w}`"),
                w.clone(),
            ));
            false
        }
    }

    fn need_poss(&self, line: usize, (p, col): &Spanned, out: &mut Vec<Diagnostic>) {
        if !self.possibilities.contains(p) {
            out.push(error(
                line,
                *col,
                format!("undeclared possibility `{p}`"),
                p.clone(),
            ));
        }
    }

    fn need_ctx(&self, line: usize, (c, col): &Spanned, out: &mut Vec<Diagnostic>) {
        if !self.contexts.contains(c) {
            out.push(error(
                line,
                *col,
                format!("undeclared context `{c}`"),
                c.clone(),
            ));
        }
    }

    fn need_stage(&self, line: usize, (s, col): &Spanned, out: &mut Vec<Diagnostic>) {
        if !self.stages.contains_key(s) {
            out.push(error(
                line,
                *col,
                format!("undeclared stage `{s}`"),
                s.clone(),
            ));
        }
    }

    fn fresh(
        &self,
        line: usize,
        taken: bool,
        what: &str,
        (n, col): &Spanned,
        out: &mut Vec<Diagnostic>,
    ) {
        if taken {
            out.push(error(
                line,
                *col,
                format!("{what} `{n}` is already declared"),
                n.clone(),
            ));
        }
    }

    fn parse(&mut self, line: usize, text: &str) -> Result<Option<Statement>, Vec<Diagnostic>> {
        let tokens = lex(line, text).map_err(|d| vec![d])?;
        if tokens.is_empty() {
            return Ok(None);
        }
        let mut cur = Cursor {
            line,
            tokens: &tokens,
            pos: 0,
            end_col: text.chars().count() + 1,
        };
        let (kw, kw_col) = cur.word("a statement").map_err(|d| vec![d])?;
        let mut diags = Vec::new();
        let kind = self
            .statement(&mut cur, &kw, kw_col, &mut diags)
            .map_err(|d| vec![d])?;
        cur.finish().map_err(|d| vec![d])?;
        if !diags.is_empty() {
            return Err(diags);
        }
        self.declare(&kind);
        Ok(Some(Statement { line, kind }))
    }

    fn statement(
        &self,
        cur: &mut Cursor<'_>,
        kw: &str,
        kw_col: usize,
        d: &mut Vec<Diagnostic>,
    ) -> Result<StatementKind, Diagnostic> {
        let line = cur.line;
        Ok(match kw {
            "world" => {
                let name = cur.ident("world name")?;
                let atoms = cur.braced_words("an atom label")?;
                self.fresh(line, self.worlds.contains_key(&name.0), "world", &name, d);
                let mut seen = BTreeSet::new();
                for (a, col) in &atoms {
                    if !seen.insert(a) {
                        d.push(error(
                            line,
                            *col,
                            format!("duplicate atom `{a}`"),
                            a.clone(),
                        ));
                    }
                }
                StatementKind::World {
                    name: name.0,
                    atoms: atoms.into_iter().map(|a| a.0).collect(),
                }
            }
            "ind" => {
                let world = cur.ident("world name")?;
                let name = cur.ident("individual name")?;
                let atoms = cur.braced_words("an atom label")?;
                if self.need_world(line, &world, d) {
                    let known = &self.worlds[&world.0];
                    for (a, col) in &atoms {
                        if !known.contains(a) {
                            d.push(error(
                                line,
                                *col,
                                format!("atom `{a}` is not declared in world `{}`", world.0),
                                a.clone(),
                            ));
                        }
                    }
                }
                StatementKind::Individual {
                    world: world.0,
                    name: name.0,
                    atoms: atoms.into_iter().map(|a| a.0).collect(),
                }
            }
            "poss" => {
                let name = cur.ident("possibility name")?;
                let functional = cur.at_keyword("functional");
                if functional {
                    cur.keyword("functional")?;
                }
                let words = cur.braced_words("a member `<individual>@<world>`")?;
                self.fresh(
                    line,
                    self.possibilities.contains(&name.0),
                    "possibility",
                    &name,
                    d,
                );
                let mut members = Vec::new();
                for (w, col) in words {
                    let Some((ind, world)) = w.rsplit_once('@') else {
                        d.push(error(line, col, "expected `<individual>@<world>`", w));
                        continue;
                    };
                    let world_col = col + ind.chars().count() + 1;
                    if self.need_world(line, &(world.to_string(), world_col), d)
                        && !self
                            .individuals
                            .contains(&(world.to_string(), ind.to_string()))
                    {
                        d.push(error(
                            line,
                            col,
                            format!("undeclared individual `{ind}` in world `{world}`"),
                            ind,
                        ));
                    }
                    members.push((ind.to_string(), world.to_string()));
                }
                StatementKind::Possibility {
                    name: name.0,
                    functional,
                    members,
                }
            }
            "construct" => {
                let name = cur.ident("possibility name")?;
                cur.punct('=')?;
                cur.keyword("comoverlap")?;
                cur.punct('(')?;
                let mut inputs = vec![cur.ident("possibility name")?];
                while cur.at_punct(',') {
                    cur.punct(',')?;
                    inputs.push(cur.ident("possibility name")?);
                }
                cur.punct(')')?;
                self.fresh(
                    line,
                    self.possibilities.contains(&name.0),
                    "possibility",
                    &name,
                    d,
                );
                for p in &inputs {
                    self.need_poss(line, p, d);
                }
                StatementKind::Construct {
                    name: name.0,
                    inputs: inputs.into_iter().map(|p| p.0).collect(),
                }
            }
            "context" => {
                let name = cur.ident("context name")?;
                cur.punct('=')?;
                cur.keyword("ctx")?;
                cur.punct('(')?;
                let agent = cur.ident("agent possibility")?;
                cur.punct(',')?;
                let now = cur.ident("now possibility")?;
                let mut parent = None;
                if cur.at_punct(',') {
                    cur.punct(',')?;
                    cur.keyword("parent")?;
                    cur.punct('=')?;
                    parent = Some(cur.ident("parent context")?);
                }
                cur.punct(')')?;
                self.fresh(line, self.contexts.contains(&name.0), "context", &name, d);
                self.need_poss(line, &agent, d);
                self.need_poss(line, &now, d);
                if let Some(p) = &parent {
                    self.need_ctx(line, p, d);
                }
                StatementKind::Context {
                    name: name.0,
                    agent: agent.0,
                    now: now.0,
                    parent: parent.map(|p| p.0),
                }
            }
            "assert" => {
                let context = cur.ident("context name")?;
                let status = cur.status()?;
                let possibility = cur.ident("possibility name")?;
                self.need_ctx(line, &context, d);
                self.need_poss(line, &possibility, d);
                StatementKind::Assert {
                    context: context.0,
                    status,
                    possibility: possibility.0,
                }
            }
            "agent" => {
                let context = cur.ident("context name")?;
                let agent = cur.ident("agent possibility")?;
                let status = if cur.peek().is_some() {
                    cur.status()?
                } else {
                    ModalStatus::Necessary
                };
                self.need_ctx(line, &context, d);
                self.need_poss(line, &agent, d);
                StatementKind::Agent {
                    context: context.0,
                    agent: agent.0,
                    status,
                }
            }
            "testify" => {
                let context = cur.ident("context name")?;
                let speaker = cur.ident("speaker possibility")?;
                let (at_now, col) = cur.word("`@<now possibility>`")?;
                let Some(now) = at_now.strip_prefix('@').filter(|n| is_identifier(n)) else {
                    return Err(error(line, col, "expected `@<now possibility>`", at_now));
                };
                let now = (now.to_string(), col + 1);
                let status = cur.status()?;
                let possibility = cur.ident("possibility name")?;
                self.need_ctx(line, &context, d);
                self.need_poss(line, &speaker, d);
                self.need_poss(line, &now, d);
                self.need_poss(line, &possibility, d);
                StatementKind::Testify {
                    context: context.0,
                    speaker: speaker.0,
                    now: now.0,
                    status,
                    possibility: possibility.0,
                }
            }
            "endorse" | "reject" => {
                let context = cur.ident("context name")?;
                let (testimony, _) = cur.word("a testimony id")?;
                self.need_ctx(line, &context, d);
                if kw == "endorse" {
                    StatementKind::Endorse {
                        context: context.0,
                        testimony,
                    }
                } else {
                    StatementKind::Reject {
                        context: context.0,
                        testimony,
                    }
                }
            }
            "epoch" => StatementKind::Epoch,
            "query" => {
                let context = cur.ident("context name")?;
                let (verb, col) = cur.word("`possibly`, `classify` or `ratio`")?;
                self.need_ctx(line, &context, d);
                let query = match verb.as_str() {
                    "possibly" | "classify" => {
                        let p = cur.ident("possibility name")?;
                        self.need_poss(line, &p, d);
                        if verb == "possibly" {
                            Query::Possibly(p.0)
                        } else {
                            Query::Classify(p.0)
                        }
                    }
                    "ratio" => {
                        let q = cur.ident("possibility name")?;
                        let p = cur.ident("possibility name")?;
                        self.need_poss(line, &q, d);
                        self.need_poss(line, &p, d);
                        Query::Ratio(q.0, p.0)
                    }
                    _ => {
                        return Err(error(
                            line,
                            col,
                            "expected `possibly`, `classify` or `ratio`",
                            verb,
                        ))
                    }
                };
                StatementKind::Query {
                    context: context.0,
                    query,
                }
            }
            "stage" => {
                let id = cur.word("a stage id")?;
                let mut parents = Vec::new();
                if cur.at_keyword("from") {
                    cur.keyword("from")?;
                    parents.push(cur.word("a stage id")?);
                    if cur.peek().is_some() {
                        parents.push(cur.word("a stage id")?);
                    }
                }
                if parents.is_empty() {
                    if id.0 != self.stage {
                        d.push(error(
                            line,
                            id.1,
                            format!("stage `{}` needs a parent (`from <stage>`)", id.0),
                            id.0.clone(),
                        ));
                    }
                } else {
                    self.fresh(line, self.stages.contains_key(&id.0), "stage", &id, d);
                    for p in &parents {
                        self.need_stage(line, p, d);
                    }
                }
                StatementKind::Stage {
                    id: id.0,
                    parents: parents.into_iter().map(|p| p.0).collect(),
                }
            }
            other => {
                return Err(error(
                    line,
                    kw_col,
                    format!("unknown statement `{other}`"),
                    other,
                ));
            }
        })
    }

    /// Records the names a successful statement introduces.
    fn declare(&mut self, kind: &StatementKind) {
        match kind {
            StatementKind::World { name, atoms } => {
                self.worlds
                    .insert(name.clone(), atoms.iter().cloned().collect());
                self.individuals.insert((name.clone(), name.clone()));
            }
            StatementKind::Individual { world, name, .. } => {
                self.individuals.insert((world.clone(), name.clone()));
            }
            StatementKind::Possibility { name, .. } | StatementKind::Construct { name, .. } => {
                self.possibilities.insert(name.clone());
            }
            StatementKind::Context { name, .. } => {
                self.contexts.insert(name.clone());
            }
            StatementKind::Assert { .. }
            | StatementKind::Agent { .. }
            | StatementKind::Endorse { .. }
            | StatementKind::Reject { .. }
            | StatementKind::Epoch => self.epoch += 1,
            StatementKind::Testify {
                context,
                speaker,
                now,
                ..
            } => {
                self.epoch += 1;
                let key = (context.clone(), speaker.clone(), now.clone());
                if self.nested.insert(key) {
                    let name =
                        nested_context_name(context, speaker, crate::doxastic::Epoch(self.epoch));
                    self.contexts.insert(name);
                }
            }
            StatementKind::Query { .. } => {}
            StatementKind::Stage { id, parents } => {
                if parents.is_empty() {
                    return;
                }
                self.stages
                    .insert(self.stage.clone(), StageSim { epoch: self.epoch });
                self.epoch = parents
                    .iter()
                    .filter_map(|p| self.stages.get(p))
                    .map(|s| s.epoch)
                    .max()
                    .unwrap_or(self.epoch);
                self.stages
                    .insert(id.clone(), StageSim { epoch: self.epoch });
                self.stage = id.clone();
            }
        }
    }
}

/// Parses one line against (and extending) the resolver's declarations.
/// Blank and comment-only lines yield `Ok(None)`.
pub fn parse_line(
    resolver: &mut Resolver,
    line: usize,
    text: &str,
) -> Result<Option<Statement>, Vec<Diagnostic>> {
    resolver.parse(line, text)
}

/// Parses a whole script. Either every statement resolves or all
/// diagnostics are returned, sorted by position.
pub fn parse_script(text: &str) -> Result<Script, Vec<Diagnostic>> {
    let mut resolver = Resolver::new();
    let mut statements = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match resolver.parse(i + 1, line) {
            Ok(Some(s)) => statements.push(s),
            Ok(None) => {}
            Err(d) => diagnostics.extend(d),
        }
    }
    if diagnostics.is_empty() {
        Ok(Script { statements })
    } else {
        diagnostics.sort();
        Err(diagnostics)
    }
}
