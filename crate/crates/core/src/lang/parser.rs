use std::collections::HashSet;

use super::lexer::{tokenize, Tok, Token};
use super::source::{ParseDiagnostic, SourceText, Span};
use crate::model::{
    Atom, Formula, KnowledgeBaseDraft, Literal, RuleKind, SpannedStatement, Statement,
};
use crate::query::Query;

const RESERVED: [&str; 2] = ["poss", "nec"];

type PResult<T> = Result<T, ParseDiagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        let t = &self.toks[self.pos];
        if t.tok == Tok::Eof {
            self.eof_span()
        } else {
            t.span
        }
    }

    /// Errors at end of input point at the last real token so that the
    /// span stays inside the text.
    fn eof_span(&self) -> Span {
        match self.toks.len() {
            n if n >= 2 => self.toks[n - 2].span,
            _ => self.toks[0].span,
        }
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> ParseDiagnostic {
        let found = self.peek();
        let message = match found {
            Tok::RParen => "unmatched `)`".to_string(),
            Tok::RBrace => "unmatched `}`".to_string(),
            _ => format!("expected {expected}, found {found}"),
        };
        ParseDiagnostic::error(message, self.span())
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(expected))
        }
    }

    /// Skips to just past the next `.` (or to end of input).
    fn synchronize(&mut self) {
        loop {
            match self.advance().tok {
                Tok::Dot | Tok::Eof => return,
                _ => {}
            }
        }
    }

    fn ident(&mut self, expected: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.advance().span;
                Ok((name, span))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn atom(&mut self) -> PResult<(Atom, Span)> {
        let (name, span) = self.ident("an atom name")?;
        if RESERVED.contains(&name.as_str()) {
            return Err(ParseDiagnostic::error(
                format!("`{name}` is reserved and cannot name an atom"),
                span,
            ));
        }
        Ok((Atom::new(name), span))
    }

    fn literal(&mut self) -> PResult<Literal> {
        let positive = !self.eat(&Tok::Bang);
        let (atom, _) = self.atom()?;
        Ok(Literal::new(atom, positive))
    }

    // formula := disjunction ('->' formula)?
    fn formula(&mut self, no_or: bool) -> PResult<Formula> {
        let lhs = self.disjunction(no_or)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula(no_or)?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self, no_or: bool) -> PResult<Formula> {
        let first = self.conjunction()?;
        if no_or || *self.peek() != Tok::Pipe {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.eat(&Tok::Pipe) {
            parts.push(self.conjunction()?);
        }
        Ok(Formula::Or(parts))
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let first = self.unary()?;
        if *self.peek() != Tok::Amp {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(Formula::And(parts))
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => self.parenthesized(),
            Tok::Ident(name) if name == "poss" || name == "nec" => {
                self.advance();
                if *self.peek() != Tok::LParen {
                    return Err(self.unexpected(&format!("`(` after `{name}`")));
                }
                let inner = self.parenthesized()?;
                Ok(if name == "poss" {
                    Formula::possibly(inner)
                } else {
                    Formula::necessarily(inner)
                })
            }
            Tok::Ident(_) => Ok(Formula::Atom(self.atom()?.0)),
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn parenthesized(&mut self) -> PResult<Formula> {
        let open = self.expect(Tok::LParen, "`(`")?.span;
        let inner = self.formula(false)?;
        match self.peek() {
            Tok::RParen => {
                self.advance();
                Ok(inner)
            }
            Tok::Eof | Tok::Dot => Err(ParseDiagnostic::error("unclosed `(`", open)),
            _ => Err(self.unexpected("`)`")),
        }
    }

    fn statement(&mut self, declared: &mut HashSet<Atom>) -> PResult<SpannedStatement> {
        let (keyword, start) = match self.peek().clone() {
            Tok::Ident(k) => (k, self.span()),
            _ => return Err(self.unexpected("a statement keyword")),
        };
        let statement = match keyword.as_str() {
            "atom" => {
                self.advance();
                let mut atoms = Vec::new();
                loop {
                    let (atom, span) = self.atom()?;
                    if !declared.insert(atom.clone()) {
                        return Err(ParseDiagnostic::error(
                            format!("duplicate atom declaration `{atom}`"),
                            span,
                        ));
                    }
                    atoms.push(atom);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                Statement::Atoms(atoms)
            }
            "incompatible" => {
                self.advance();
                self.expect(Tok::LBrace, "`{`")?;
                let mut members = vec![self.literal()?];
                while self.eat(&Tok::Comma) {
                    members.push(self.literal()?);
                }
                self.expect(Tok::RBrace, "`,` or `}`")?;
                Statement::Incompatible(members)
            }
            "strict" | "defeasible" | "rule" => {
                self.advance();
                let kind = match keyword.as_str() {
                    "strict" => RuleKind::Strict,
                    "defeasible" => RuleKind::Defeasible,
                    _ => RuleKind::Modal,
                };
                self.rule(kind)?
            }
            other => {
                return Err(ParseDiagnostic::error(
                    format!("unknown keyword `{other}`"),
                    start,
                ))
            }
        };
        let end = self.expect(Tok::Dot, "`.`")?.span;
        Ok(SpannedStatement {
            statement,
            span: start.to(end),
        })
    }

    fn rule(&mut self, kind: RuleKind) -> PResult<Statement> {
        let label = match (self.peek().clone(), self.peek_at(1)) {
            (Tok::Ident(l), Tok::Colon) => {
                self.advance();
                self.advance();
                Some(l)
            }
            _ => None,
        };
        let (antecedent, consequent) = match kind {
            RuleKind::Strict => {
                let start = self.span();
                match self.formula(false)? {
                    Formula::Implies(a, c) => (*a, *c),
                    _ => {
                        return Err(ParseDiagnostic::error(
                            "strict rule needs the form `antecedent -> consequent`",
                            start,
                        ))
                    }
                }
            }
            RuleKind::Defeasible | RuleKind::Modal => {
                let antecedent = self.formula(false)?;
                let arrow = if kind == RuleKind::Defeasible {
                    Tok::Tilde
                } else {
                    Tok::FatArrow
                };
                let what = format!("{arrow}");
                self.expect(arrow, &what)?;
                (antecedent, self.formula(false)?)
            }
        };
        Ok(Statement::Rule {
            kind,
            label,
            antecedent,
            consequent,
        })
    }

    fn formula_set(&mut self) -> PResult<Vec<Formula>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            out.push(self.formula(false)?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        Ok(out)
    }

    /// `{a, !b}` or a bare list `a, !b`; braces allow the empty set.
    fn literal_set(&mut self) -> PResult<Vec<Literal>> {
        let braced = self.eat(&Tok::LBrace);
        let mut out = Vec::new();
        if braced && self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            out.push(self.literal()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if braced {
            self.expect(Tok::RBrace, "`,` or `}`")?;
        }
        Ok(out)
    }

    fn atom_list(&mut self) -> PResult<Vec<Atom>> {
        let braced = self.eat(&Tok::LBrace);
        let mut out = Vec::new();
        if braced && self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            out.push(self.atom()?.0);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if braced {
            self.expect(Tok::RBrace, "`,` or `}`")?;
        }
        Ok(out)
    }

    fn close_call(&mut self, open: Span) -> PResult<()> {
        match self.peek() {
            Tok::RParen => {
                self.advance();
                Ok(())
            }
            Tok::Eof => Err(ParseDiagnostic::error("unclosed `(`", open)),
            _ => Err(self.unexpected("`)`")),
        }
    }

    fn query(&mut self) -> PResult<Query> {
        let (keyword, span) = self.ident("a query keyword")?;
        let query = match keyword.as_str() {
            "incoherent" => Query::Incoherent(self.formula_set()?),
            "entails" | "counterfactual" => {
                let premises = self.formula_set()?;
                self.expect(Tok::Turnstile, "`|=`")?;
                let conclusion = self.formula(false)?;
                if keyword == "entails" {
                    Query::Entails {
                        premises,
                        conclusion,
                    }
                } else {
                    Query::Counterfactual {
                        premises,
                        conclusion,
                    }
                }
            }
            "possible" | "necessary" => {
                let open = self.expect(Tok::LParen, "`(`")?.span;
                let formula = self.formula(true)?;
                let context = if self.eat(&Tok::Pipe) {
                    Some(self.formula(false)?)
                } else {
                    None
                };
                self.close_call(open)?;
                if keyword == "possible" {
                    Query::Possible { formula, context }
                } else {
                    Query::Necessary { formula, context }
                }
            }
            "defeasible" | "weight" => {
                let open = self.expect(Tok::LParen, "`(`")?.span;
                let subject = self.literal()?;
                self.expect(Tok::Pipe, "`|`")?;
                let set = self.literal_set()?;
                self.close_call(open)?;
                if keyword == "defeasible" {
                    Query::Defeasible {
                        goal: subject,
                        facts: set,
                    }
                } else {
                    Query::Weight {
                        subject,
                        reference: set,
                    }
                }
            }
            "abduce" => {
                let open = self.expect(Tok::LParen, "`(`")?.span;
                let observations = self.literal_set()?;
                self.expect(Tok::Pipe, "`|`")?;
                let candidates = self.literal_set()?;
                self.close_call(open)?;
                Query::Abduce {
                    observations,
                    candidates,
                }
            }
            "chain" => {
                let open = self.expect(Tok::LParen, "`(`")?.span;
                let start = self.formula(false)?;
                self.close_call(open)?;
                Query::Chain(start)
            }
            "classify" => {
                let open = self.expect(Tok::LParen, "`(`")?.span;
                let (class, _) = self.atom()?;
                self.expect(Tok::Pipe, "`|`")?;
                let features = self.atom_list()?;
                self.close_call(open)?;
                Query::Classify { class, features }
            }
            other => {
                return Err(ParseDiagnostic::error(
                    format!("unknown query keyword `{other}`"),
                    span,
                ))
            }
        };
        self.eat(&Tok::Dot);
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of query"));
        }
        Ok(query)
    }
}

fn lex(src: &SourceText) -> Result<Vec<Token>, Vec<ParseDiagnostic>> {
    let (toks, diags) = tokenize(&src.content);
    if diags.is_empty() {
        Ok(toks)
    } else {
        Err(diags)
    }
}

/// Parses a knowledge-base file. On failure every statement-level error
/// is reported and no draft is returned.
pub fn parse_kb(src: &SourceText) -> Result<KnowledgeBaseDraft, Vec<ParseDiagnostic>> {
    let mut p = Parser::new(lex(src)?);
    let mut diags = Vec::new();
    let mut draft = KnowledgeBaseDraft::default();
    let mut declared = HashSet::new();
    while *p.peek() != Tok::Eof {
        match p.statement(&mut declared) {
            Ok(s) => draft.statements.push(s),
            Err(d) => {
                diags.push(d);
                p.synchronize();
            }
        }
    }
    if diags.is_empty() {
        Ok(draft)
    } else {
        Err(diags)
    }
}

pub fn parse_query(src: &SourceText) -> Result<Query, Vec<ParseDiagnostic>> {
    let mut p = Parser::new(lex(src)?);
    p.query().map_err(|d| vec![d])
}

/// Parses a single standalone formula, e.g. a `--context` argument.
pub fn parse_formula(src: &SourceText) -> Result<Formula, Vec<ParseDiagnostic>> {
    let mut p = Parser::new(lex(src)?);
    let f = p.formula(false).map_err(|d| vec![d])?;
    if *p.peek() != Tok::Eof {
        return Err(vec![p.unexpected("end of formula")]);
    }
    Ok(f)
}

/// Parses a comma-separated literal list, with or without braces.
pub fn parse_literals(src: &SourceText) -> Result<Vec<Literal>, Vec<ParseDiagnostic>> {
    let mut p = Parser::new(lex(src)?);
    if *p.peek() == Tok::Eof {
        return Ok(Vec::new());
    }
    let lits = p.literal_set().map_err(|d| vec![d])?;
    if *p.peek() != Tok::Eof {
        return Err(vec![p.unexpected("`,` or end of list")]);
    }
    Ok(lits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RuleKind;

    fn kb(text: &str) -> KnowledgeBaseDraft {
        parse_kb(&SourceText::stdin(text)).unwrap()
    }

    fn kb_err(text: &str) -> Vec<ParseDiagnostic> {
        parse_kb(&SourceText::stdin(text)).unwrap_err()
    }

    fn query(text: &str) -> Query {
        parse_query(&SourceText::stdin(text)).unwrap()
    }

    fn f(text: &str) -> Formula {
        parse_formula(&SourceText::stdin(text)).unwrap()
    }

    #[test]
    fn minimal_declaration() {
        let d = kb("atom p.");
        assert_eq!(d.atom_count(), 1);
        assert_eq!(d.constraint_count(), 0);
        assert_eq!(d.statements.len(), 1);
    }

    #[test]
    fn blackberry_constraint() {
        let d = kb("atom blackberry, red, ripe.\nincompatible {blackberry, red, ripe}.");
        assert_eq!(d.atom_count(), 3);
        assert_eq!(d.constraint_count(), 1);
        match &d.statements[1].statement {
            Statement::Incompatible(m) => assert_eq!(m.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tweety_draft() {
        let d = kb("atom penguin, bird, flies.\nstrict penguin -> bird.\nincompatible {penguin, flies}.\ndefeasible bird ~> flies.");
        assert_eq!(d.atom_count(), 3);
        assert_eq!(d.constraint_count(), 1);
        assert_eq!(d.rule_count(RuleKind::Strict), 1);
        assert_eq!(d.rule_count(RuleKind::Defeasible), 1);
    }

    #[test]
    fn labels_and_modal_rules() {
        let d = kb("atom p, q, r. rule m: p => poss(q & !r).");
        match &d.statements[1].statement {
            Statement::Rule {
                kind,
                label,
                consequent,
                ..
            } => {
                assert_eq!(*kind, RuleKind::Modal);
                assert_eq!(label.as_deref(), Some("m"));
                assert_eq!(
                    *consequent,
                    Formula::possibly(Formula::and([
                        Formula::atom("q"),
                        Formula::not(Formula::atom("r"))
                    ]))
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        assert_eq!(
            f("a | b & !c -> d -> e"),
            Formula::implies(
                Formula::or([
                    Formula::atom("a"),
                    Formula::and([Formula::atom("b"), Formula::not(Formula::atom("c"))])
                ]),
                Formula::implies(Formula::atom("d"), Formula::atom("e"))
            )
        );
        assert_eq!(
            f("(a & b) & c"),
            Formula::and([
                Formula::and([Formula::atom("a"), Formula::atom("b")]),
                Formula::atom("c")
            ])
        );
    }

    #[test]
    fn strict_rule_splits_top_implication() {
        let d = kb("atom a, b, c. strict a -> b -> c.");
        match &d.statements[1].statement {
            Statement::Rule {
                antecedent,
                consequent,
                ..
            } => {
                assert_eq!(*antecedent, Formula::atom("a"));
                assert_eq!(
                    *consequent,
                    Formula::implies(Formula::atom("b"), Formula::atom("c"))
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn query_forms() {
        assert!(matches!(
            query("entails {donkey} |= mammal"),
            Query::Entails { .. }
        ));
        match query("possible(red & !ripe | blackberry)") {
            Query::Possible {
                formula,
                context: Some(c),
            } => {
                assert_eq!(
                    formula,
                    Formula::and([Formula::atom("red"), Formula::not(Formula::atom("ripe"))])
                );
                assert_eq!(c, Formula::atom("blackberry"));
            }
            other => panic!("{other:?}"),
        }
        match query("incoherent {p, p -> q, !q}") {
            Query::Incoherent(fs) => assert_eq!(fs.len(), 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            query("defeasible(flies | penguin)"),
            Query::Defeasible {
                goal: Atom::new("flies").pos(),
                facts: vec![Atom::new("penguin").pos()]
            }
        );
        assert!(matches!(
            query("necessary(poss(red & !ripe) | blackberry)"),
            Query::Necessary { .. }
        ));
        assert!(matches!(
            query("abduce({wet_lawn, wet_street} | rain, sprinkler)"),
            Query::Abduce { .. }
        ));
        assert!(matches!(
            query("weight(penguin | {bird, flies})"),
            Query::Weight { .. }
        ));
        assert!(matches!(query("chain(blackberry)"), Query::Chain(_)));
        assert!(matches!(
            query("classify(reptile | scales, cold_blooded)"),
            Query::Classify { .. }
        ));
        assert!(matches!(
            query("counterfactual {donkey} |= mammal"),
            Query::Counterfactual { .. }
        ));
    }

    #[test]
    fn disjunction_in_possible_needs_parens() {
        match query("possible((a | b) | c)") {
            Query::Possible {
                formula: Formula::Or(_),
                context: Some(_),
            } => {}
            other => panic!("{other:?}"),
        }
        // the first bare `|` separates the context
        assert_eq!(
            query("possible(a | b | c)"),
            Query::Possible {
                formula: Formula::atom("a"),
                context: Some(Formula::or([Formula::atom("b"), Formula::atom("c")]))
            }
        );
    }

    #[test]
    fn errors() {
        let d = kb_err("atom p.\nfrobnicate p.");
        assert_eq!(d[0].message, "unknown keyword `frobnicate`");
        assert_eq!((d[0].span.line, d[0].span.column), (2, 1));

        let d = kb_err("atom p, q.\nstrict (p -> q.");
        assert_eq!(d[0].message, "unclosed `(`");
        assert_eq!((d[0].span.line, d[0].span.column), (2, 8));

        let d = kb_err("atom p, q.\nstrict p -> q).");
        assert_eq!(d[0].message, "unmatched `)`");

        let d = kb_err("atom p, q.\natom p.");
        assert_eq!(d[0].message, "duplicate atom declaration `p`");
        assert_eq!((d[0].span.line, d[0].span.column), (2, 6));

        // recovery reports independent errors in later statements
        let d = kb_err("bogus.\natom p\nincompatible {p q}.");
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn undeclared_atoms_parse() {
        // undeclared names are a validation concern, not a parse error
        assert!(parse_kb(&SourceText::stdin("strict p -> q.")).is_ok());
    }

    #[test]
    fn literal_lists() {
        let l = parse_literals(&SourceText::stdin("a, !b")).unwrap();
        assert_eq!(l, vec![Atom::new("a").pos(), Atom::new("b").neg()]);
        assert_eq!(parse_literals(&SourceText::stdin("{}")).unwrap(), vec![]);
    }
}
