//! Choice-rule elimination.
//!
//! `l {a1; ...; an} u :- B.` becomes one disjunctive rule `ai | _x_ai :- B.`
//! per head atom, where `_x_ai` is a hidden complement atom, plus the
//! constraints `:- B, #count{a1; ...; an} < l.` and
//! `:- B, #count{a1; ...; an} > u.` for the bounds that are present.

use crate::ast::*;
use crate::error::FrontendError;

/// Hidden complement of a choice atom.
pub fn complement_atom(atom: &Atom) -> Atom {
    Atom {
        predicate: format!("{HIDDEN_PREFIX}{}", atom.predicate),
        args: atom.args.clone(),
    }
}

pub fn desugar_choice(rule: &Rule) -> Result<Vec<Rule>, FrontendError> {
    let Head::Choice(choice) = &rule.head else {
        return Ok(vec![rule.clone()]);
    };
    if let (Some(lower), Some(upper)) = (choice.lower, choice.upper) {
        if lower > upper {
            return Err(FrontendError::Bound {
                rule: rule.to_string(),
                lower,
                upper,
            });
        }
    }
    let mut atoms: Vec<Atom> = Vec::with_capacity(choice.atoms.len());
    for a in &choice.atoms {
        if !atoms.contains(a) {
            atoms.push(a.clone());
        }
    }

    let mut out: Vec<Rule> = atoms
        .iter()
        .map(|a| Rule {
            head: Head::Disjunction(vec![a.clone(), complement_atom(a)]),
            body: rule.body.clone(),
        })
        .collect();

    let count = |comparison, bound| AggregateLiteral {
        function: AggregateFunction::Count,
        elements: atoms
            .iter()
            .map(|a| AggregateElement {
                weight: 1,
                atom: a.clone(),
            })
            .collect(),
        comparison,
        bound,
        negated: false,
    };
    let mut bound_constraint = |agg: AggregateLiteral| {
        let mut body = rule.body.clone();
        body.push(BodyItem::Aggregate(agg));
        out.push(Rule {
            head: Head::Disjunction(Vec::new()),
            body,
        });
    };
    // A lower bound of zero or less can never be violated.
    if let Some(lower) = choice.lower.filter(|&l| l > 0) {
        bound_constraint(count(Comparison::Lt, lower));
    }
    if let Some(upper) = choice.upper {
        bound_constraint(count(Comparison::Gt, upper));
    }
    Ok(out)
}

/// Rewrite every choice rule of `p`; other rules pass through unchanged.
pub fn desugar_program(p: &Program) -> Result<Program, FrontendError> {
    let mut out = Program::default();
    for (i, rule) in p.rules.iter().enumerate() {
        let meta = p.meta.get(i).copied().unwrap_or_default();
        for r in desugar_choice(rule)? {
            out.rules.push(r);
            out.meta.push(meta);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn desugar_text(src: &str) -> Vec<String> {
        let p = parse_program(src).unwrap();
        desugar_choice(&p.rules[0])
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect()
    }

    #[test]
    fn singleton_choice() {
        assert_eq!(desugar_text("{a}."), vec!["a | _x_a."]);
    }

    #[test]
    fn guarded_choice() {
        assert_eq!(
            desugar_text("{a; b} :- c."),
            vec!["a | _x_a :- c.", "b | _x_b :- c."]
        );
    }

    #[test]
    fn bounded_choice() {
        assert_eq!(
            desugar_text("1 {a; b} 1."),
            vec![
                "a | _x_a.",
                "b | _x_b.",
                ":- #count{a; b} < 1.",
                ":- #count{a; b} > 1."
            ]
        );
    }

    #[test]
    fn inverted_bounds_rejected() {
        let p = parse_program("2 {a; b} 1.").unwrap();
        assert!(matches!(
            desugar_choice(&p.rules[0]),
            Err(FrontendError::Bound { lower: 2, upper: 1, .. })
        ));
    }

    #[test]
    fn non_choice_passes_through() {
        let p = parse_program("a :- b.").unwrap();
        assert_eq!(desugar_choice(&p.rules[0]).unwrap(), p.rules);
    }

    #[test]
    fn hidden_atoms_flagged() {
        assert!(complement_atom(&Atom::prop("a")).is_hidden());
        assert!(!Atom::prop("a").is_hidden());
    }
}
