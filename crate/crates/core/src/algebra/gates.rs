use super::table::{GateId, TruthTable9};
use super::Trit;

/// Named gates of strong Kleene logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KleeneGate {
    Min,
    Max,
    Nand,
    Nor,
    Xor,
    Xnor,
    /// `max(-a, b)`
    Implies,
    /// `max(a, -b)`
    ConverseImplies,
    NegA,
    NegB,
    PassA,
    PassB,
    Const(Trit),
}

impl KleeneGate {
    pub fn apply(self, a: Trit, b: Trit) -> Trit {
        match self {
            KleeneGate::Min => a.and(b),
            KleeneGate::Max => a.or(b),
            KleeneGate::Nand => -a.and(b),
            KleeneGate::Nor => -a.or(b),
            KleeneGate::Xor => a.and(-b).or((-a).and(b)),
            KleeneGate::Xnor => -(a.and(-b).or((-a).and(b))),
            KleeneGate::Implies => (-a).or(b),
            KleeneGate::ConverseImplies => a.or(-b),
            KleeneGate::NegA => -a,
            KleeneGate::NegB => -b,
            KleeneGate::PassA => a,
            KleeneGate::PassB => b,
            KleeneGate::Const(v) => v,
        }
    }

    pub fn table(self) -> TruthTable9 {
        TruthTable9::from_fn(|a, b| self.apply(a, b))
    }

    pub fn id(self) -> GateId {
        self.table().id()
    }
}

/// The curated named-gate library.
pub const NAMED_GATES: [(&str, KleeneGate); 15] = [
    ("AND", KleeneGate::Min),
    ("OR", KleeneGate::Max),
    ("NAND", KleeneGate::Nand),
    ("NOR", KleeneGate::Nor),
    ("XOR", KleeneGate::Xor),
    ("XNOR", KleeneGate::Xnor),
    ("IMPLIES", KleeneGate::Implies),
    ("CONVERSE", KleeneGate::ConverseImplies),
    ("NOT_A", KleeneGate::NegA),
    ("NOT_B", KleeneGate::NegB),
    ("A", KleeneGate::PassA),
    ("B", KleeneGate::PassB),
    ("FALSE", KleeneGate::Const(Trit::False)),
    ("UNKNOWN", KleeneGate::Const(Trit::Unknown)),
    ("TRUE", KleeneGate::Const(Trit::True)),
];

/// Name of a gate if it is in the curated library.
pub fn named_gate(id: GateId) -> Option<&'static str> {
    NAMED_GATES.iter().find(|(_, g)| g.id() == id).map(|(n, _)| *n)
}

/// Strong Kleene extension of a Boolean gate given by its corner outputs
/// `[f(-1,-1), f(-1,+1), f(+1,-1), f(+1,+1)]`: an UNKNOWN input yields the
/// common value of all Boolean completions if they agree, else UNKNOWN.
pub fn kleene_extension(corners: [bool; 4]) -> TruthTable9 {
    let f = |a: bool, b: bool| corners[2 * a as usize + b as usize];
    let completions = |t: Trit| -> &'static [bool] {
        match t {
            Trit::False => &[false],
            Trit::True => &[true],
            Trit::Unknown => &[false, true],
        }
    };
    TruthTable9::from_fn(|a, b| {
        let mut seen_true = false;
        let mut seen_false = false;
        for &x in completions(a) {
            for &y in completions(b) {
                if f(x, y) {
                    seen_true = true;
                } else {
                    seen_false = true;
                }
            }
        }
        match (seen_true, seen_false) {
            (true, false) => Trit::True,
            (false, true) => Trit::False,
            _ => Trit::Unknown,
        }
    })
}
