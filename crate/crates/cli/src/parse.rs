//! Theory files: `#` comments, `[kind name]` section headers, and a token
//! body per section. See the README for the grammar.

use rtk_core::approx::{ApproxIndex, ApproximationStructure};
use rtk_core::convex::{parse_q, PointSpec, RationalPoint};
use rtk_core::{BitSet, Error, Lumping, Result, SpecMap, StateSpace};

use crate::model::*;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Arrow,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Lt,
    Plus,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

impl Token {
    fn word(&self) -> Option<&str> {
        match &self.tok {
            Tok::Word(w) => Some(w),
            _ => None,
        }
    }

    fn show(&self) -> String {
        match &self.tok {
            Tok::Word(w) => w.clone(),
            Tok::Arrow => "->".into(),
            Tok::LBrace => "{".into(),
            Tok::RBrace => "}".into(),
            Tok::Comma => ",".into(),
            Tok::Colon => ":".into(),
            Tok::Lt => "<".into(),
            Tok::Plus => "+".into(),
            Tok::Eq => "=".into(),
        }
    }
}

fn err(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        message: message.into(),
    }
}

fn err_at(t: &Token, message: impl Into<String>) -> Error {
    err(t.line, t.col, message)
}

const PUNCT: &str = "{},:<+=[]#";

/// Tokens of one line fragment; `col0` is the column of its first char.
fn lex(text: &str, line: usize, col0: usize, out: &mut Vec<Token>) -> Result<()> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        let push = |tok, out: &mut Vec<Token>| out.push(Token { tok, line, col });
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            push(Tok::Arrow, out);
            i += 2;
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '<' => Some(Tok::Lt),
            '+' => Some(Tok::Plus),
            '=' => Some(Tok::Eq),
            '[' | ']' => return Err(err(line, col, format!("unexpected `{c}`"))),
            _ => None,
        };
        if let Some(t) = single {
            push(t, out);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len()
            && !chars[i].is_whitespace()
            && !PUNCT.contains(chars[i])
            && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
        {
            i += 1;
        }
        push(Tok::Word(chars[start..i].iter().collect()), out);
    }
    Ok(())
}

struct Section {
    header: Vec<Token>,
    body: Vec<Token>,
    line: usize,
    col: usize,
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let lead = content.len() - content.trim_start().len();
        let trimmed = content.trim_start();
        let mut body_from = 0;
        let mut body_col = 1;
        if trimmed.starts_with('[') {
            let col = content[..lead].chars().count() + 1;
            let close = trimmed
                .find(']')
                .ok_or_else(|| err(line, col, "unterminated section header"))?;
            let mut header = Vec::new();
            lex(&trimmed[1..close], line, col + 1, &mut header)?;
            if header.is_empty() {
                return Err(err(line, col, "empty section header"));
            }
            sections.push(Section {
                header,
                body: Vec::new(),
                line,
                col,
            });
            body_from = lead + close + 1;
            body_col = content[..body_from].chars().count() + 1;
        }
        let rest = &content[body_from..];
        let mut toks = Vec::new();
        lex(rest, line, body_col, &mut toks)?;
        if toks.is_empty() {
            continue;
        }
        match sections.last_mut() {
            Some(s) => s.body.extend(toks),
            None => return Err(err_at(&toks[0], "content before the first section header")),
        }
    }
    Ok(sections)
}

/// A cursor over section body tokens.
struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Where to point when input ends early.
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    fn new(s: &'a Section) -> Self {
        let end = s.body.last().or(s.header.last()).map_or((s.line, s.col), |t| (t.line, t.col));
        Cursor { toks: &s.body, pos: 0, end }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn eof(&self, what: &str) -> Error {
        err(self.end.0, self.end.1, format!("expected {what}, found end of section"))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<&'a Token> {
        match self.next() {
            Some(t) if t.tok == tok => Ok(t),
            Some(t) => Err(err_at(t, format!("expected {what}, found `{}`", t.show()))),
            None => Err(self.eof(what)),
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a Token> {
        match self.next() {
            Some(t) if t.word().is_some() => Ok(t),
            Some(t) => Err(err_at(t, format!("expected {what}, found `{}`", t.show()))),
            None => Err(self.eof(what)),
        }
    }

    /// A `key:` at the cursor, consumed.
    fn key(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos)?;
        t.word()?;
        if self.toks.get(self.pos + 1).map(|c| &c.tok) == Some(&Tok::Colon) {
            self.pos += 2;
            Some(t)
        } else {
            None
        }
    }

    fn at_key(&self) -> bool {
        let is_word = self.toks.get(self.pos).and_then(|t| t.word()).is_some();
        is_word && self.toks.get(self.pos + 1).map(|c| &c.tok) == Some(&Tok::Colon)
    }

    /// Words up to the next key or directive.
    fn words(&mut self, stop: &[&str]) -> Vec<&'a Token> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            match t.word() {
                Some(w) if !self.at_key() && !w.starts_with('@') && !stop.contains(&w) => {
                    out.push(t);
                    self.pos += 1;
                }
                _ => break,
            }
        }
        out
    }
}

fn state(space: &StateSpace, t: &Token) -> Result<usize> {
    let w = t.word().expect("word token");
    space
        .index(w)
        .ok_or_else(|| err_at(t, format!("unknown state `{w}` in {space}")))
}

fn wrap(s: &Section, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::DuplicateName(_) | Error::UnknownReference(_) => e,
        other => err(s.line, s.col, other.to_string()),
    }
}

struct Parser {
    model: Model,
}

impl Parser {
    fn reference<'m, T>(&'m self, t: &Token, f: impl Fn(&'m Model, &str) -> Result<&'m T>) -> Result<&'m T> {
        let name = t.word().expect("word token");
        f(&self.model, name).map_err(|e| match e {
            Error::UnknownReference(m) => Error::UnknownReference(format!("{}:{}: {m}", t.line, t.col)),
            other => other,
        })
    }

    /// `states` names the `[states]` space.
    fn space_ref(&self, t: &Token) -> Result<StateSpace> {
        if t.word() == Some("states") {
            return self
                .model
                .default_space()
                .cloned()
                .map_err(|_| Error::UnknownReference(format!("{}:{}: no [states] section", t.line, t.col)));
        }
        Ok(self.reference(t, Model::space_decl)?.space.clone())
    }

    fn default_space(&self, s: &Section) -> Result<StateSpace> {
        self.model
            .default_space()
            .cloned()
            .map_err(|_| Error::UnknownReference(format!("{}:{}: no [states] section and no `space:` given", s.line, s.col)))
    }

    fn add(&mut self, s: &Section, item: Item) -> Result<()> {
        let name = item.name().map(str::to_string);
        let dup = match &name {
            Some(n) => self.model.find(n).is_some(),
            None => self.model.default_space().is_ok(),
        };
        if dup {
            let at = s.header.get(1).map_or((s.line, s.col), |t| (t.line, t.col));
            return Err(Error::DuplicateName(format!(
                "{}:{}: `{}` is already defined",
                at.0,
                at.1,
                name.as_deref().unwrap_or("[states]")
            )));
        }
        self.model.items.push(item);
        Ok(())
    }

    fn section(&mut self, s: &Section) -> Result<()> {
        let kind_tok = &s.header[0];
        let kind = kind_tok
            .word()
            .ok_or_else(|| err_at(kind_tok, "expected a section kind"))?;
        if kind == "states" {
            if s.header.len() > 1 {
                return Err(err_at(&s.header[1], "[states] takes no name"));
            }
            let space = self.states(s)?;
            return self.add(s, Item::Space(SpaceDecl { name: None, space }));
        }
        let known = ["space", "map", "monoid", "lumping", "approx", "points"];
        if !known.contains(&kind) {
            return Err(err_at(kind_tok, format!("unknown section `{kind}`")));
        }
        let name_tok = s
            .header
            .get(1)
            .filter(|t| t.word().is_some())
            .ok_or_else(|| err(s.line, s.col, format!("[{kind}] needs a name")))?;
        let name = name_tok.word().expect("checked").to_string();
        if name == "states" {
            return Err(err_at(name_tok, "`states` is reserved for the [states] section"));
        }
        if kind != "map" {
            if let Some(extra) = s.header.get(2) {
                return Err(err_at(extra, format!("unexpected `{}` in header", extra.show())));
            }
        }
        let item = match kind {
            "space" => Item::Space(SpaceDecl {
                name: Some(name),
                space: self.states(s)?,
            }),
            "map" => Item::Map(self.map(s, name)?),
            "monoid" => Item::Monoid(self.monoid(s, name)?),
            "lumping" => Item::Lumping(self.lumping(s, name)?),
            "approx" => Item::Approx(self.approx(s, name)?),
            _ => Item::Points(self.points(s, name)?),
        };
        self.add(s, item)
    }

    fn states(&self, s: &Section) -> Result<StateSpace> {
        let mut labels = Vec::new();
        for t in &s.body {
            match t.word() {
                Some(w) => labels.push(w.to_string()),
                None => return Err(err_at(t, format!("unexpected `{}` in state list", t.show()))),
            }
        }
        StateSpace::new(&labels).map_err(|e| wrap(s, e))
    }

    fn map(&self, s: &Section, name: String) -> Result<MapDecl> {
        let (source_name, target_name) = match s.header.len() {
            2 => (None, None),
            6 if s.header[2].tok == Tok::Colon && s.header[4].tok == Tok::Arrow => {
                let (a, b) = (&s.header[3], &s.header[5]);
                if a.word().is_none() || b.word().is_none() {
                    return Err(err(s.line, s.col, "expected `[map NAME : SOURCE -> TARGET]`"));
                }
                (Some(a), Some(b))
            }
            _ => return Err(err(s.line, s.col, "expected `[map NAME]` or `[map NAME : SOURCE -> TARGET]`")),
        };
        let source = match source_name {
            Some(t) => self.space_ref(t)?,
            None => self.default_space(s)?,
        };
        let target = match target_name {
            Some(t) => self.space_ref(t)?,
            None => source.clone(),
        };
        let n = source.size();
        let mut table: Vec<Option<BitSet>> = vec![None; n];
        let mut c = Cursor::new(s);
        while let Some(t) = c.next() {
            if t.word().is_none() {
                return Err(err_at(t, format!("expected a state, found `{}`", t.show())));
            }
            let from = state(&source, t)?;
            c.expect(Tok::Arrow, "`->`")?;
            let mut img = BitSet::empty(target.size());
            let open = c.peek().ok_or_else(|| c.eof("an image"))?;
            if open.tok == Tok::LBrace {
                c.next();
                if c.peek().map(|t| &t.tok) == Some(&Tok::RBrace) {
                    return Err(err_at(open, format!("empty image for `{}`", source.label(from))));
                }
                loop {
                    img.insert(state(&target, c.word("a state")?)?);
                    match c.next() {
                        Some(t) if t.tok == Tok::Comma => continue,
                        Some(t) if t.tok == Tok::RBrace => break,
                        Some(t) => return Err(err_at(t, format!("expected `,` or `}}`, found `{}`", t.show()))),
                        None => return Err(c.eof("`}`")),
                    }
                }
            } else {
                img.insert(state(&target, c.word("a state or `{`")?)?);
            }
            if table[from].is_some() {
                return Err(err_at(t, format!("second image for `{}`", source.label(from))));
            }
            table[from] = Some(img);
        }
        let mut full = Vec::with_capacity(n);
        for (i, img) in table.into_iter().enumerate() {
            full.push(img.ok_or_else(|| err(s.line, s.col, format!("no image for state `{}`", source.label(i))))?);
        }
        let map = SpecMap::from_bits(&source, &target, full).map_err(|e| wrap(s, e))?;
        Ok(MapDecl {
            name,
            source: source_name.map(|t| t.word().expect("word").to_string()),
            target: target_name.map(|t| t.word().expect("word").to_string()),
            map,
        })
    }

    fn monoid(&self, s: &Section, name: String) -> Result<MonoidDecl> {
        let mut c = Cursor::new(s);
        let mut space_tok = None;
        let mut gens: Option<Vec<&Token>> = None;
        let mut directive: Option<(MonoidSource, &Token)> = None;
        let mut cap = None;
        while let Some(t) = c.peek() {
            if let Some(k) = c.key() {
                match k.word().expect("word") {
                    "space" => space_tok = Some(c.word("a space name")?),
                    "generators" => gens = Some(c.words(&[])),
                    "cap" => {
                        let v = c.word("a number")?;
                        let n: usize = v
                            .word()
                            .and_then(|w| w.parse().ok())
                            .filter(|&n| n >= 1)
                            .ok_or_else(|| err_at(v, "cap must be a positive integer"))?;
                        cap = Some(n);
                    }
                    other => return Err(err_at(k, format!("unknown key `{other}` in [monoid]"))),
                }
                continue;
            }
            c.next();
            let src = match t.word() {
                Some("@all-functions") => MonoidSource::AllFunctions,
                Some("@permutations") => MonoidSource::Permutations,
                _ => return Err(err_at(t, format!("unexpected `{}` in [monoid]", t.show()))),
            };
            if directive.is_some() {
                return Err(err_at(t, "only one directive per monoid"));
            }
            directive = Some((src, t));
        }
        if let (Some(_), Some((_, t))) = (&gens, &directive) {
            return Err(err_at(t, "a monoid takes either generators or a directive"));
        }
        let gen_decls = gens
            .unwrap_or_default()
            .into_iter()
            .map(|t| Ok((t, self.reference(t, Model::map)?)))
            .collect::<Result<Vec<_>>>()?;
        let space = match (space_tok, gen_decls.first()) {
            (Some(t), _) => self.space_ref(t)?,
            (None, Some((_, m))) => m.map.source().clone(),
            (None, None) => self.default_space(s)?,
        };
        for (t, m) in &gen_decls {
            if !m.map.is_endomorphism() || m.map.source() != &space {
                return Err(err_at(t, format!("`{}` is not an endomorphism of {space}", m.name)));
            }
        }
        let source = match directive {
            Some((src, _)) => src,
            None => MonoidSource::Generators(gen_decls.iter().map(|(_, m)| m.name.clone()).collect()),
        };
        Ok(MonoidDecl {
            name,
            space_name: space_tok.map(|t| t.word().expect("word").to_string()),
            space,
            source,
            cap,
            generators: gen_decls.into_iter().map(|(_, m)| m.map.clone()).collect(),
        })
    }

    fn lumping(&self, s: &Section, name: String) -> Result<LumpingDecl> {
        let mut c = Cursor::new(s);
        let mut space_tok = None;
        let mut map_tok = None;
        let mut blocks: Vec<Vec<&Token>> = Vec::new();
        while c.peek().is_some() {
            if let Some(k) = c.key() {
                match k.word().expect("word") {
                    "space" => space_tok = Some(c.word("a space name")?),
                    "map" => map_tok = Some(c.word("a map name")?),
                    other => return Err(err_at(k, format!("unknown key `{other}` in [lumping]"))),
                }
                continue;
            }
            c.expect(Tok::LBrace, "`{`, `map:` or `space:`")?;
            let mut block = Vec::new();
            loop {
                block.push(c.word("a state")?);
                match c.next() {
                    Some(t) if t.tok == Tok::Comma => continue,
                    Some(t) if t.tok == Tok::RBrace => break,
                    Some(t) => return Err(err_at(t, format!("expected `,` or `}}`, found `{}`", t.show()))),
                    None => return Err(c.eof("`}`")),
                }
            }
            blocks.push(block);
        }
        match (map_tok, blocks.is_empty()) {
            (Some(m), false) => return Err(err_at(m, "a lumping takes either `map:` or blocks")),
            (None, true) => return Err(err(s.line, s.col, "a lumping needs `map:` or blocks")),
            _ => {}
        }
        if let Some(m) = map_tok {
            let decl = self.reference(m, Model::map)?;
            if let Some(t) = space_tok {
                if self.space_ref(t)? != *decl.map.source() {
                    return Err(err_at(m, format!("`{}` does not act on the declared space", decl.name)));
                }
            }
            let lumping = Lumping::new(decl.map.clone()).map_err(|e| wrap(s, e))?;
            return Ok(LumpingDecl {
                name,
                space_name: space_tok.map(|t| t.word().expect("word").to_string()),
                source: LumpingSource::Map(decl.name.clone()),
                lumping,
            });
        }
        let space = match space_tok {
            Some(t) => self.space_ref(t)?,
            None => self.default_space(s)?,
        };
        let n = space.size();
        let mut class = vec![usize::MAX; n];
        for (k, b) in blocks.iter().enumerate() {
            for t in b {
                let i = state(&space, t)?;
                if class[i] != usize::MAX {
                    return Err(err_at(t, format!("state `{}` is in two blocks", space.label(i))));
                }
                class[i] = k;
            }
        }
        // Unlisted states are blocks of their own.
        for (next, c) in (blocks.len()..).zip(class.iter_mut().filter(|c| **c == usize::MAX)) {
            *c = next;
        }
        let lumping = Lumping::from_partition(&space, |i| class[i]);
        let mut canon: Vec<Vec<String>> = Vec::new();
        for i in 0..n {
            if class[..i].contains(&class[i]) {
                continue;
            }
            canon.push((i..n).filter(|&j| class[j] == class[i]).map(|j| space.label(j).to_string()).collect());
        }
        Ok(LumpingDecl {
            name,
            space_name: space_tok.map(|t| t.word().expect("word").to_string()),
            source: LumpingSource::Blocks(canon),
            lumping,
        })
    }

    fn approx(&self, s: &Section, name: String) -> Result<ApproxDecl> {
        let mut c = Cursor::new(s);
        let mut space_tok = None;
        let mut labels: Vec<String> = Vec::new();
        let mut order = Vec::new();
        let mut top: Option<&Token> = None;
        let mut zero = None;
        let mut at: Vec<(&Token, &Token)> = Vec::new();
        let mut chains: Vec<ChainDecl> = Vec::new();
        while let Some(t) = c.peek() {
            if t.word() == Some("at") && !c.at_key() {
                c.next();
                let eps = c.word("an index element")?;
                c.expect(Tok::Colon, "`:`")?;
                at.push((eps, c.word("a map name")?));
                continue;
            }
            let k = c
                .key()
                .ok_or_else(|| err_at(t, format!("unexpected `{}` in [approx]", t.show())))?;
            match k.word().expect("word") {
                "space" => space_tok = Some(c.word("a space name")?),
                "index" => labels.extend(c.words(&["at"]).iter().map(|t| t.word().expect("word").to_string())),
                "top" => top = Some(c.word("an index element")?),
                "zero" => zero = Some(c.word("an index element")?.word().expect("word").to_string()),
                "chain" => chains.push(ChainDecl {
                    members: c.words(&["at"]).iter().map(|t| t.word().expect("word").to_string()).collect(),
                    sums: Vec::new(),
                }),
                "order" => {
                    while c.peek().and_then(|t| t.word()).is_some() && !c.at_key() && c.peek().and_then(|t| t.word()) != Some("at") {
                        let mut prev = c.word("an index element")?.word().expect("word").to_string();
                        c.expect(Tok::Lt, "`<`")?;
                        loop {
                            let next = c.word("an index element")?.word().expect("word").to_string();
                            order.push((prev, next.clone()));
                            prev = next;
                            if c.peek().map(|t| &t.tok) == Some(&Tok::Lt) {
                                c.next();
                            } else {
                                break;
                            }
                        }
                    }
                }
                "sum" => {
                    let chain = chains
                        .last_mut()
                        .ok_or_else(|| err_at(k, "`sum:` must follow a `chain:`"))?;
                    while c.peek().and_then(|t| t.word()).is_some() && !c.at_key() && c.peek().and_then(|t| t.word()) != Some("at") {
                        let a = c.word("an index element")?.word().expect("word").to_string();
                        c.expect(Tok::Plus, "`+`")?;
                        let b = c.word("an index element")?.word().expect("word").to_string();
                        c.expect(Tok::Eq, "`=`")?;
                        let r = c.word("an index element")?.word().expect("word").to_string();
                        chain.sums.push((a, b, r));
                    }
                }
                other => return Err(err_at(k, format!("unknown key `{other}` in [approx]"))),
            }
        }
        let top = top.ok_or_else(|| err(s.line, s.col, "[approx] needs `top:`"))?;
        let top_label = top.word().expect("word").to_string();
        let chain_args: Vec<(Vec<String>, Vec<(String, String, String)>)> =
            chains.iter().map(|c| (c.members.clone(), c.sums.clone())).collect();
        let index = ApproxIndex::new(&labels, &order, &top_label, zero.as_deref(), &chain_args).map_err(|e| wrap(s, e))?;
        let mut family: Vec<Option<(String, SpecMap)>> = vec![None; index.len()];
        let mut space: Option<StateSpace> = match space_tok {
            Some(t) => Some(self.space_ref(t)?),
            None => None,
        };
        for (eps, m) in &at {
            let k = index
                .position(eps.word().expect("word"))
                .map_err(|_| err_at(eps, format!("`{}` is not an index element", eps.show())))?;
            if family[k].is_some() {
                return Err(err_at(eps, format!("second map for `{}`", eps.show())));
            }
            let decl = self.reference(m, Model::map)?;
            let sp = space.get_or_insert_with(|| decl.map.source().clone());
            if !decl.map.is_endomorphism() || decl.map.source() != sp {
                return Err(err_at(m, format!("`{}` is not an endomorphism of {sp}", decl.name)));
            }
            family[k] = Some((decl.name.clone(), decl.map.clone()));
        }
        let mut maps = Vec::new();
        let mut fam = Vec::new();
        for (k, f) in family.into_iter().enumerate() {
            let (n, m) = f.ok_or_else(|| err(s.line, s.col, format!("no map for index `{}`", index.label(k))))?;
            maps.push((index.label(k).to_string(), n));
            fam.push(m);
        }
        let structure = ApproximationStructure::new(index, fam).map_err(|e| wrap(s, e))?;
        Ok(ApproxDecl {
            name,
            space_name: space_tok.map(|t| t.word().expect("word").to_string()),
            labels,
            order,
            top: top_label,
            zero,
            maps,
            chains,
            structure,
        })
    }

    fn points(&self, s: &Section, name: String) -> Result<PointsDecl> {
        let mut rows: Vec<(usize, Vec<&Token>)> = Vec::new();
        for t in &s.body {
            if t.word().is_none() {
                return Err(err_at(t, format!("unexpected `{}` in [points]", t.show())));
            }
            match rows.last_mut() {
                Some((l, row)) if *l == t.line => row.push(t),
                _ => rows.push((t.line, vec![t])),
            }
        }
        if rows.is_empty() {
            return Err(err(s.line, s.col, "[points] needs at least one point"));
        }
        let dim = rows[0].1.len();
        let mut pts = Vec::new();
        for (_, row) in rows {
            if row.len() != dim {
                return Err(err_at(row[0], format!("expected {dim} coordinates, found {}", row.len())));
            }
            let coords = row
                .iter()
                .map(|t| parse_q(t.word().expect("word")).ok_or_else(|| err_at(t, format!("`{}` is not a rational", t.show()))))
                .collect::<Result<Vec<_>>>()?;
            pts.push(RationalPoint::new(coords));
        }
        Ok(PointsDecl {
            name,
            points: PointSpec::new(pts).map_err(|e| wrap(s, e))?,
        })
    }
}

/// Parses and resolves a whole theory file.
pub fn parse_theory(text: &str) -> Result<Model> {
    let mut p = Parser { model: Model::default() };
    for s in split_sections(text)? {
        p.section(&s)?;
    }
    Ok(p.model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_and_maps() {
        let m = parse_theory("[states] a b c d\n[map swap_ab] a->b b->a c->c d->d\n").unwrap();
        assert_eq!(m.default_space().unwrap().size(), 4);
        let f = &m.map("swap_ab").unwrap().map;
        assert_eq!(f.image(0).labels(), vec!["b"]);
        let g = parse_theory("[states] a b\n[map g] a -> {a, b}  # fuzzy\n b->b").unwrap();
        assert_eq!(g.map("g").unwrap().map.image(0).len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_theory("[states] a b\n[map bad] a->{} b->b").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 14, .. }), "{e:?}");
        let e = parse_theory("[states] a b\n[monoid T]\ngenerators: f\n[map f] a->a b->b").unwrap_err();
        assert!(matches!(&e, Error::UnknownReference(m) if m.starts_with("3:13")), "{e:?}");
        let e = parse_theory("[states] a\n[map f] a->a\n[map f] a->a").unwrap_err();
        assert!(matches!(&e, Error::DuplicateName(m) if m.starts_with("3:6")), "{e:?}");
        assert!(matches!(parse_theory("[frobnicate x]"), Err(Error::Parse { line: 1, col: 2, .. })));
        assert!(matches!(parse_theory("[states] a\n[map f] a->z"), Err(Error::Parse { line: 2, col: 12, .. })));
        assert!(matches!(parse_theory("[states] a b\n[map f] a->a"), Err(Error::Parse { .. })));
        assert!(matches!(parse_theory("a b"), Err(Error::Parse { line: 1, col: 1, .. })));
    }

    #[test]
    fn other_sections() {
        let text = "\
[states] 00 01 10 11
[map c0] 00->00 01->00 10->00 11->00
[monoid T]
generators: c0
cap: 50
[monoid All] @all-functions
[lumping first] {00, 01} {10, 11}
[map r0] 00->00 01->01 10->10 11->11
[map r1] 00->{00,01} 01->{00,01} 10->{10,11} 11->{10,11}
[approx H]
index: 0 1
order: 0<1
top: 1
zero: 0
at 0: r0
at 1: r1
chain: 0 1
sum: 0+0=0 0+1=1
[points P]
0 1/2
1 -3/4
";
        let m = parse_theory(text).unwrap();
        assert_eq!(m.monoid("T").unwrap().close().unwrap().len(), 2);
        assert_eq!(m.monoid("All").unwrap().close().unwrap().len(), 256);
        assert_eq!(m.lumping("first").unwrap().lumping.map().image(0).len(), 2);
        assert_eq!(m.approx("H").unwrap().structure.index().len(), 2);
        assert_eq!(m.points("P").unwrap().points.len(), 2);
        assert!(matches!(m.map("T"), Err(Error::UnknownReference(_))));
    }
}
