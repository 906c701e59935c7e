//! First-order formulas over graphs: one binary relation `~` (adjacency)
//! and equality, in prenex form.
//!
//! Concrete syntax, loosest to tightest: `<->`, `->`, `|`, `&`, `!`. All
//! binary operators fold left. Atoms are always parenthesized: `(x = y)`,
//! `(x ~ y)`. A formula is a declaration prefix followed by a matrix:
//! `F x` declares a free variable, `A y` / `E z` quantify. `#` starts a
//! line comment.
//!
//! ```text
//! F w A u E v ((u = w) | (u ~ v))
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("offset {pos}: {msg}")]
pub struct FormulaError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, FormulaError> {
    Err(FormulaError { pos, msg: msg.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantifierKind {
    Forall,
    Exists,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quantifier {
    pub kind: QuantifierKind,
    /// Slot of the quantified variable (index into `Formula::vars`).
    pub var: usize,
}

/// Quantifier-free part; operands are variable slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Matrix {
    Eq(usize, usize),
    Adj(usize, usize),
    Not(Box<Matrix>),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
    Iff(Box<Matrix>, Box<Matrix>),
}

/// Which side of the quantifier-alternation hierarchy a prefix starts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Sigma,
    Pi,
}

/// Alternation depth and leading side of a prenex prefix. Level 0 formulas
/// are both sigma and pi; the side is reported as `Sigma` by convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrefixClass {
    pub level: u32,
    pub side: Side,
}

impl PrefixClass {
    /// Does every formula of this class have an equivalent of the shape
    /// exists-block, forall-block, exists-block?
    pub fn fits_sigma3(&self) -> bool {
        self.level < 3 || (self.level == 3 && self.side == Side::Sigma)
    }
}

impl fmt::Display for PrefixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            return write!(f, "quantifier-free");
        }
        match self.side {
            Side::Sigma => write!(f, "sigma_{}", self.level),
            Side::Pi => write!(f, "pi_{}", self.level),
        }
    }
}

/// A prenex first-order sentence or formula with declared free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    /// Every variable name; a slot is an index into this list.
    vars: Vec<String>,
    /// Slots declared free, in declaration order.
    free: Vec<usize>,
    /// Quantifier prefix, outermost first.
    prefix: Vec<Quantifier>,
    matrix: Matrix,
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        Parser::new(text)?.parse()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, slot: usize) -> &str {
        &self.vars[slot]
    }

    pub fn free_slots(&self) -> &[usize] {
        &self.free
    }

    pub fn prefix(&self) -> &[Quantifier] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_sentence(&self) -> bool {
        self.free.is_empty()
    }

    /// Maximal runs of one quantifier kind, outermost first.
    pub fn blocks(&self) -> Vec<(QuantifierKind, Vec<usize>)> {
        let mut out: Vec<(QuantifierKind, Vec<usize>)> = Vec::new();
        for q in &self.prefix {
            match out.last_mut() {
                Some((kind, slots)) if *kind == q.kind => slots.push(q.var),
                _ => out.push((q.kind, vec![q.var])),
            }
        }
        out
    }

    pub fn prefix_class(&self) -> PrefixClass {
        let blocks = self.blocks();
        let side = match blocks.first() {
            Some((QuantifierKind::Forall, _)) => Side::Pi,
            _ => Side::Sigma,
        };
        PrefixClass { level: blocks.len() as u32, side }
    }

    /// Rewrite the prefix into exactly three blocks, exists-forall-exists,
    /// each nonempty, by inserting dummy quantified variables (named with a
    /// `_d` prefix) that the matrix never reads.
    ///
    /// The rewrite preserves meaning on every structure with at least one
    /// element. On the empty structure a leading dummy exists-block makes
    /// the padded sentence false, so callers that care about the empty
    /// graph must special-case it against the original formula.
    pub fn pad_to_sigma3(&self) -> Result<Formula, FormulaError> {
        if !self.prefix_class().fits_sigma3() {
            return err(
                0,
                format!(
                    "prefix class {} does not fit the exists-forall-exists shape",
                    self.prefix_class()
                ),
            );
        }
        let mut vars = self.vars.clone();
        let mut counter = 0usize;
        let mut fresh = |vars: &mut Vec<String>| {
            loop {
                counter += 1;
                let name = format!("_d{counter}");
                if !vars.iter().any(|v| *v == name) {
                    vars.push(name);
                    return vars.len() - 1;
                }
            }
        };

        // Distribute the existing blocks over the three target blocks in
        // order, keyed by kind; pad each target block that stays empty.
        let blocks = self.blocks();
        let mut target: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        let mut next = 0usize; // first target block the next source block may use
        for (kind, slots) in blocks {
            let want = match kind {
                QuantifierKind::Exists => [0, 2],
                QuantifierKind::Forall => [1, 1],
            };
            let t = if next <= want[0] { want[0] } else { want[1] };
            if t < next || (kind == QuantifierKind::Forall && t != 1) {
                return err(0, "prefix does not embed into exists-forall-exists".to_string());
            }
            target[t].extend(slots);
            next = t;
        }
        for t in &mut target {
            if t.is_empty() {
                t.push(fresh(&mut vars));
            }
        }
        let mut prefix = Vec::new();
        for (i, slots) in target.iter().enumerate() {
            let kind = if i == 1 { QuantifierKind::Forall } else { QuantifierKind::Exists };
            prefix.extend(slots.iter().map(|&var| Quantifier { kind, var }));
        }
        Ok(Formula { vars, free: self.free.clone(), prefix, matrix: self.matrix.clone() })
    }

    fn render_matrix(&self, m: &Matrix, out: &mut String) {
        match m {
            Matrix::Eq(a, b) => {
                out.push_str(&format!("({} = {})", self.vars[*a], self.vars[*b]));
            }
            Matrix::Adj(a, b) => {
                out.push_str(&format!("({} ~ {})", self.vars[*a], self.vars[*b]));
            }
            Matrix::Not(x) => {
                out.push('!');
                self.render_matrix(x, out);
            }
            Matrix::And(a, b) => self.render_bin(a, "&", b, out),
            Matrix::Or(a, b) => self.render_bin(a, "|", b, out),
            Matrix::Implies(a, b) => self.render_bin(a, "->", b, out),
            Matrix::Iff(a, b) => self.render_bin(a, "<->", b, out),
        }
    }

    fn render_bin(&self, a: &Matrix, op: &str, b: &Matrix, out: &mut String) {
        out.push('(');
        self.render_matrix(a, out);
        out.push_str(&format!(" {op} "));
        self.render_matrix(b, out);
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for &slot in &self.free {
            s.push_str(&format!("F {} ", self.vars[slot]));
        }
        for q in &self.prefix {
            let k = match q.kind {
                QuantifierKind::Forall => 'A',
                QuantifierKind::Exists => 'E',
            };
            s.push_str(&format!("{k} {} ", self.vars[q.var]));
        }
        self.render_matrix(&self.matrix, &mut s);
        f.write_str(&s)
    }
}

// --- lexing and parsing ---

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Eq,
    Tilde,
    Amp,
    Pipe,
    Bang,
    Arrow,
    DArrow,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: Vec<String>,
    free: Vec<usize>,
    prefix: Vec<Quantifier>,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, FormulaError> {
        let mut toks = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\r' | '\n' => i += 1,
                '#' => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                    }
                }
                '(' => {
                    toks.push((i, Tok::LParen));
                    i += 1;
                }
                ')' => {
                    toks.push((i, Tok::RParen));
                    i += 1;
                }
                '=' => {
                    toks.push((i, Tok::Eq));
                    i += 1;
                }
                '~' => {
                    toks.push((i, Tok::Tilde));
                    i += 1;
                }
                '&' => {
                    toks.push((i, Tok::Amp));
                    i += 1;
                }
                '|' => {
                    toks.push((i, Tok::Pipe));
                    i += 1;
                }
                '!' => {
                    toks.push((i, Tok::Bang));
                    i += 1;
                }
                '-' => {
                    if bytes.get(i + 1) == Some(&b'>') {
                        toks.push((i, Tok::Arrow));
                        i += 2;
                    } else {
                        return err(i, "expected '->'");
                    }
                }
                '<' => {
                    if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                        toks.push((i, Tok::DArrow));
                        i += 3;
                    } else {
                        return err(i, "expected '<->'");
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len()
                        && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    toks.push((start, Tok::Ident(text[start..i].to_string())));
                }
                _ => return err(i, format!("unexpected character '{c}'")),
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            end: text.len(),
            vars: Vec::new(),
            free: Vec::new(),
            prefix: Vec::new(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), FormulaError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => err(pos, format!("expected {what}")),
        }
    }

    fn declare(&mut self, name: String, pos: usize) -> Result<usize, FormulaError> {
        if self.vars.iter().any(|v| *v == name) {
            return err(pos, format!("variable '{name}' declared twice"));
        }
        self.vars.push(name);
        Ok(self.vars.len() - 1)
    }

    fn lookup(&self, name: &str, pos: usize) -> Result<usize, FormulaError> {
        match self.vars.iter().position(|v| v == name) {
            Some(slot) => Ok(slot),
            None => err(pos, format!("undeclared variable '{name}'")),
        }
    }

    fn parse(mut self) -> Result<Formula, FormulaError> {
        // Declaration prefix: `F`/`A`/`E` act as keywords only when an
        // identifier follows; the matrix always starts with '(' or '!'.
        loop {
            let (is_decl, kind) = match (self.peek(), self.peek2()) {
                (Some(Tok::Ident(k)), Some(Tok::Ident(_))) => match k.as_str() {
                    "F" => (true, None),
                    "A" => (true, Some(QuantifierKind::Forall)),
                    "E" => (true, Some(QuantifierKind::Exists)),
                    _ => (false, None),
                },
                _ => (false, None),
            };
            if !is_decl {
                break;
            }
            self.bump();
            let pos = self.here();
            let name = match self.bump() {
                Some(Tok::Ident(n)) => n,
                _ => unreachable!("peek2 checked"),
            };
            let slot = self.declare(name, pos)?;
            match kind {
                None => {
                    if !self.prefix.is_empty() {
                        return err(pos, "free declarations must precede quantifiers");
                    }
                    self.free.push(slot);
                }
                Some(kind) => self.prefix.push(Quantifier { kind, var: slot }),
            }
        }
        let matrix = self.parse_iff()?;
        if self.peek().is_some() {
            return err(self.here(), "trailing input after formula");
        }
        Ok(Formula { vars: self.vars, free: self.free, prefix: self.prefix, matrix })
    }

    fn parse_iff(&mut self) -> Result<Matrix, FormulaError> {
        let mut lhs = self.parse_impl()?;
        while self.peek() == Some(&Tok::DArrow) {
            self.bump();
            let rhs = self.parse_impl()?;
            lhs = Matrix::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_impl(&mut self) -> Result<Matrix, FormulaError> {
        let mut lhs = self.parse_or()?;
        while self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.parse_or()?;
            lhs = Matrix::Implies(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Matrix, FormulaError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = Matrix::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Matrix, FormulaError> {
        let mut lhs = self.parse_not()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.parse_not()?;
            lhs = Matrix::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_not(&mut self) -> Result<Matrix, FormulaError> {
        if self.peek() == Some(&Tok::Bang) {
            self.bump();
            return Ok(Matrix::Not(Box::new(self.parse_not()?)));
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Matrix, FormulaError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::LParen) => {}
            _ => return err(pos, "expected '('"),
        }
        // An identifier right after '(' starts an atom; anything else is a
        // parenthesized subformula.
        if let Some(Tok::Ident(_)) = self.peek() {
            let pos = self.here();
            let a = match self.bump() {
                Some(Tok::Ident(n)) => self.lookup(&n, pos)?,
                _ => unreachable!(),
            };
            let op_pos = self.here();
            let op = self.bump();
            let pos = self.here();
            let b = match self.bump() {
                Some(Tok::Ident(n)) => self.lookup(&n, pos)?,
                _ => return err(pos, "expected variable"),
            };
            self.expect(Tok::RParen, "')'")?;
            match op {
                Some(Tok::Eq) => Ok(Matrix::Eq(a, b)),
                Some(Tok::Tilde) => Ok(Matrix::Adj(a, b)),
                _ => err(op_pos, "expected '=' or '~'"),
            }
        } else {
            let inner = self.parse_iff()?;
            self.expect(Tok::RParen, "')'")?;
            Ok(inner)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn parses_catalog_shapes() {
        let f = p("A x A y A z ((x = y) | (y = z) | (x = z) | !(x ~ y) | !(y ~ z) | !(x ~ z))");
        assert_eq!(f.prefix().len(), 3);
        assert!(f.is_sentence());
        assert_eq!(f.prefix_class(), PrefixClass { level: 1, side: Side::Pi });

        let f = p("A u A v E w ((u = v) | (u ~ v) | ((u ~ w) & (v ~ w)))");
        assert_eq!(f.prefix_class(), PrefixClass { level: 2, side: Side::Pi });

        let f = p("E u E v (!(u = v) & !(u ~ v))");
        assert_eq!(f.prefix_class(), PrefixClass { level: 1, side: Side::Sigma });
    }

    #[test]
    fn free_variables_and_comments() {
        let f = p("# free vertex w\nF w A u ((u = w) -> (u ~ w) -> (w ~ u))");
        assert_eq!(f.free_slots(), &[0]);
        assert_eq!(f.var_name(0), "w");
        assert!(!f.is_sentence());
        // Left association: (a -> b) -> c.
        match f.matrix() {
            Matrix::Implies(a, _) => assert!(matches!(**a, Matrix::Implies(_, _))),
            other => panic!("wrong shape: {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // & binds tighter than |, both tighter than ->, then <->.
        let f = p("F a F b ((a = b) | (a ~ b) & (b ~ a) <-> (a = a) -> (b = b))");
        match f.matrix() {
            Matrix::Iff(l, r) => {
                match &**l {
                    Matrix::Or(_, rhs) => assert!(matches!(**rhs, Matrix::And(_, _))),
                    other => panic!("wrong lhs: {other:?}"),
                }
                assert!(matches!(**r, Matrix::Implies(_, _)));
            }
            other => panic!("wrong shape: {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(Formula::parse("A x (x = y)").is_err()); // undeclared y
        assert!(Formula::parse("A x A x (x = x)").is_err()); // duplicate
        assert!(Formula::parse("A x (x = x) junk").is_err());
        assert!(Formula::parse("A x (x ! x)").is_err());
        assert!(Formula::parse("A x (x = x").is_err());
        assert!(Formula::parse("E x F y (x = y)").is_err()); // free after quantifier
        assert!(Formula::parse("A x x").is_err());
        let e = Formula::parse("A x (x @ x)").unwrap_err();
        assert!(e.pos > 0);
    }

    #[test]
    fn keywords_are_contextual() {
        // Variables may be named A, E, or F.
        let f = p("A A E E (A ~ E)");
        assert_eq!(f.vars(), &["A".to_string(), "E".to_string()]);
        assert_eq!(f.prefix().len(), 2);
    }

    #[test]
    fn prefix_classes() {
        assert_eq!(p("F x (x = x)").prefix_class().level, 0);
        assert!(p("F x (x = x)").prefix_class().fits_sigma3());
        assert_eq!(p("E x A y E z (x = x)").prefix_class(), PrefixClass {
            level: 3,
            side: Side::Sigma
        });
        assert!(p("E x A y E z (x = x)").prefix_class().fits_sigma3());
        assert!(!p("A x E y A z (x = x)").prefix_class().fits_sigma3());
        assert!(!p("E a A x E y A z (x = x)").prefix_class().fits_sigma3());
        assert_eq!(p("A x A y E z E w (x = x)").prefix_class().level, 2);
    }

    #[test]
    fn sigma3_padding_shapes() {
        let check = |src: &str| {
            let f = p(src);
            let padded = f.pad_to_sigma3().unwrap();
            let blocks = padded.blocks();
            assert_eq!(blocks.len(), 3, "{src}");
            assert_eq!(blocks[0].0, QuantifierKind::Exists);
            assert_eq!(blocks[1].0, QuantifierKind::Forall);
            assert_eq!(blocks[2].0, QuantifierKind::Exists);
            assert!(blocks.iter().all(|(_, s)| !s.is_empty()));
            // Original quantifiers survive in order.
            let orig: Vec<usize> = f.prefix().iter().map(|q| q.var).collect();
            let kept: Vec<usize> = padded
                .prefix()
                .iter()
                .filter(|q| !padded.var_name(q.var).starts_with("_d"))
                .map(|q| q.var)
                .collect();
            assert_eq!(orig, kept, "{src}");
            padded
        };
        check("A x A y (x = y)"); // pi_1: dummies before and after
        check("E x (x = x)");
        check("E x A y (x ~ y)");
        check("A y E z (y ~ z)");
        check("E x A y E z ((x = y) | (y ~ z))");
        check("F v (v = v)");
        let padded = check("A x (x = x)");
        assert_eq!(padded.prefix().len(), 3);

        assert!(p("A x E y A z (x = x)").pad_to_sigma3().is_err());
    }

    #[test]
    fn dummy_names_avoid_collisions() {
        let f = p("E _d1 (_d1 = _d1)");
        let padded = f.pad_to_sigma3().unwrap();
        let names: Vec<&str> = padded.vars().iter().map(|s| s.as_str()).collect();
        let uniq: std::collections::HashSet<&str> = names.iter().copied().collect();
        assert_eq!(names.len(), uniq.len());
    }

    // Random structural round trip: render then reparse.
    fn arb_matrix(slots: usize) -> impl Strategy<Value = Matrix> {
        let var = 0..slots;
        let leaf = (var.clone(), 0..slots, prop::bool::ANY).prop_map(|(a, b, adj)| {
            if adj {
                Matrix::Adj(a, b)
            } else {
                Matrix::Eq(a, b)
            }
        });
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|m| Matrix::Not(Box::new(m))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Matrix::And(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Matrix::Or(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Matrix::Implies(Box::new(a), Box::new(b))),
                (inner.clone(), inner)
                    .prop_map(|(a, b)| Matrix::Iff(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(
            nfree in 0usize..2,
            kinds in prop::collection::vec(prop::bool::ANY, 1..5),
            seed_matrix in arb_matrix(6),
        ) {
            let total = 6usize;
            let vars: Vec<String> = (0..total).map(|i| format!("v{i}")).collect();
            let nq = kinds.len().min(total - nfree);
            let prefix: Vec<Quantifier> = kinds[..nq]
                .iter()
                .enumerate()
                .map(|(i, &e)| Quantifier {
                    kind: if e { QuantifierKind::Exists } else { QuantifierKind::Forall },
                    var: nfree + i,
                })
                .collect();
            // Limit matrix slots to declared ones.
            let declared = nfree + nq;
            fn clamp(m: &Matrix, lim: usize) -> Matrix {
                match m {
                    Matrix::Eq(a, b) => Matrix::Eq(a % lim, b % lim),
                    Matrix::Adj(a, b) => Matrix::Adj(a % lim, b % lim),
                    Matrix::Not(x) => Matrix::Not(Box::new(clamp(x, lim))),
                    Matrix::And(a, b) =>
                        Matrix::And(Box::new(clamp(a, lim)), Box::new(clamp(b, lim))),
                    Matrix::Or(a, b) =>
                        Matrix::Or(Box::new(clamp(a, lim)), Box::new(clamp(b, lim))),
                    Matrix::Implies(a, b) =>
                        Matrix::Implies(Box::new(clamp(a, lim)), Box::new(clamp(b, lim))),
                    Matrix::Iff(a, b) =>
                        Matrix::Iff(Box::new(clamp(a, lim)), Box::new(clamp(b, lim))),
                }
            }
            let f = Formula {
                vars: vars[..declared].to_vec(),
                free: (0..nfree).collect(),
                prefix,
                matrix: clamp(&seed_matrix, declared),
            };
            let rendered = f.to_string();
            let back = Formula::parse(&rendered).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
