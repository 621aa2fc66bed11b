//! The reference automata used throughout the docs and tests.

use crate::automaton::MealyAutomaton;
use crate::format::parse_automaton;

/// Four-letter, three-state, connected.
pub const A1_TEXT: &str = "mealy A1
alphabet 1 2 3 4
states x y z
x: 1|2->x 2|1->x 3|4->x 4|3->z
y: 1|2->y 2|1->z 3|4->y 4|3->x
z: 1|2->z 2|3->y 3|4->z 4|1->y
";

/// Three-letter, three-state, disconnected.
pub const A2_TEXT: &str = "mealy A2
alphabet 1 2 3
states x y z
x: 1|1->x 2|3->x 3|2->x
y: 1|1->y 2|2->y 3|3->z
z: 1|2->z 2|1->z 3|3->y
";

/// Three states, every transition a self-loop copying its input.
pub const I3_TEXT: &str = "mealy I3
alphabet 1 2
states x y z
x: 1|1->x 2|2->x
y: 1|1->y 2|2->y
z: 1|1->z 2|2->z
";

/// Cyclic shift `x → y → z → x` on every letter, outputs copy inputs.
pub const CS_TEXT: &str = "mealy CS
alphabet 1 2
states x y z
x: 1|1->y 2|2->y
y: 1|1->z 2|2->z
z: 1|1->x 2|2->x
";

pub fn a1() -> MealyAutomaton {
    parse_automaton(A1_TEXT).expect("A1 parses")
}

pub fn a2() -> MealyAutomaton {
    parse_automaton(A2_TEXT).expect("A2 parses")
}

pub fn i3() -> MealyAutomaton {
    parse_automaton(I3_TEXT).expect("I3 parses")
}

pub fn cyclic_shift() -> MealyAutomaton {
    parse_automaton(CS_TEXT).expect("CS parses")
}

/// `n`-state automaton over `m` letters with every state acting trivially.
pub fn identity(n: usize, m: usize) -> MealyAutomaton {
    MealyAutomaton::from_fn(
        format!("I{n}"),
        (0..n).map(|k| format!("q{k}")).collect(),
        (0..m).map(|k| k.to_string()).collect(),
        |q, i| (q, i),
    )
    .expect("identity automaton is well formed")
}
