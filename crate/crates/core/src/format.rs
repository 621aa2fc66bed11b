//! Text format for automata.
//!
//! ```text
//! mealy A1
//! alphabet 1 2 3 4
//! states x y z
//! x: 1|2->x 2|1->x 3|4->x 4|3->z
//! y: 1|2->y 2|1->z 3|4->y 4|3->x
//! z: 1|2->z 2|3->y 3|4->z 4|1->y
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Every state needs exactly
//! one transition per letter.

use crate::automaton::{valid_name, MealyAutomaton};
use crate::error::{ParseError, ParseErrorKind};

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
    last: usize,
) -> Result<(usize, Vec<&'a str>), ParseError> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| err(last + 1, ParseErrorKind::Syntax(format!("expected `{keyword}` line"))))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(err(no, ParseErrorKind::Syntax(format!("expected `{keyword}`"))));
    }
    Ok((no, toks.collect()))
}

fn names(no: usize, toks: &[&str]) -> Result<Vec<String>, ParseError> {
    let mut out: Vec<String> = Vec::with_capacity(toks.len());
    for t in toks {
        if !valid_name(t) {
            return Err(err(no, ParseErrorKind::InvalidName(t.to_string())));
        }
        if out.iter().any(|n| n == t) {
            return Err(err(no, ParseErrorKind::DuplicateName(t.to_string())));
        }
        out.push(t.to_string());
    }
    Ok(out)
}

/// Parses an automaton document.
pub fn parse_automaton(text: &str) -> Result<MealyAutomaton, ParseError> {
    let all: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .collect();
    let last = all.last().map_or(0, |&(n, _)| n);
    let mut lines = all.iter().copied().filter(|(_, l)| !l.is_empty());

    let (no, toks) = header(&mut lines, "mealy", last)?;
    let name = match toks.as_slice() {
        [n] => n.to_string(),
        _ => return Err(err(no, ParseErrorKind::Syntax("expected `mealy <name>`".into()))),
    };
    let (alpha_line, toks) = header(&mut lines, "alphabet", last)?;
    if toks.is_empty() {
        return Err(err(alpha_line, ParseErrorKind::EmptyAlphabet));
    }
    let letters = names(alpha_line, &toks)?;
    let (states_line, toks) = header(&mut lines, "states", last)?;
    if toks.is_empty() {
        return Err(err(states_line, ParseErrorKind::EmptyStateset));
    }
    let states = names(states_line, &toks)?;

    let (nq, nl) = (states.len(), letters.len());
    let mut delta = vec![vec![None; nl]; nq];
    let mut rho = vec![vec![0; nl]; nq];
    let mut row_line = vec![None; nq];
    let find = |list: &[String], t: &str, no: usize| {
        list.iter()
            .position(|n| n == t)
            .ok_or_else(|| err(no, ParseErrorKind::UnknownSymbol(t.to_string())))
    };

    for (no, line) in lines {
        let (head, rest) = line.split_once(':').ok_or_else(|| {
            err(
                no,
                ParseErrorKind::Syntax("expected `<state>: <in>|<out>-><state> ...`".into()),
            )
        })?;
        let q = find(&states, head.trim(), no)?;
        if row_line[q].is_some() {
            return Err(err(
                no,
                ParseErrorKind::Syntax(format!("second line for state `{}`", states[q])),
            ));
        }
        row_line[q] = Some(no);
        for tok in rest.split_whitespace() {
            let bad = || err(no, ParseErrorKind::Syntax(format!("malformed transition `{tok}`")));
            let (io, target) = tok.split_once("->").ok_or_else(bad)?;
            let (input, output) = io.split_once('|').ok_or_else(bad)?;
            let i = find(&letters, input, no)?;
            let o = find(&letters, output, no)?;
            let t = find(&states, target, no)?;
            if delta[q][i].is_some() {
                return Err(err(
                    no,
                    ParseErrorKind::DuplicateTransition {
                        state: states[q].clone(),
                        letter: letters[i].clone(),
                    },
                ));
            }
            delta[q][i] = Some(t);
            rho[q][i] = o;
        }
    }

    for q in 0..nq {
        for i in 0..nl {
            if delta[q][i].is_none() {
                return Err(err(
                    row_line[q].unwrap_or(states_line),
                    ParseErrorKind::MissingTransition {
                        state: states[q].clone(),
                        letter: letters[i].clone(),
                    },
                ));
            }
        }
    }
    let delta = delta
        .into_iter()
        .map(|r| r.into_iter().map(Option::unwrap).collect())
        .collect();
    MealyAutomaton::new(name, states, letters, delta, rho).map_err(|e| err(1, ParseErrorKind::Syntax(e.to_string())))
}

/// Writes the text format with states and letters in declaration order.
pub fn serialize(a: &MealyAutomaton) -> String {
    let mut out = format!(
        "mealy {}\nalphabet {}\nstates {}\n",
        if a.name().is_empty() || !valid_name(a.name()) {
            "unnamed"
        } else {
            a.name()
        },
        a.letter_names().join(" "),
        a.state_names().join(" ")
    );
    for (q, qn) in a.state_names().iter().enumerate() {
        out.push_str(qn);
        out.push(':');
        for (i, iname) in a.letter_names().iter().enumerate() {
            out.push_str(&format!(
                " {}|{}->{}",
                iname,
                a.letter_names()[a.output(q, i)],
                a.state_names()[a.next(q, i)]
            ));
        }
        out.push('\n');
    }
    out
}
