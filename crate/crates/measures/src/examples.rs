use crate::{MeasureError, MeasureSpec, Result, RowGen, SeqGen};

pub const EXAMPLE_NAMES: [&str; 4] = ["ex-a1", "ex-011-11", "ex-111-b1-alt", "ex-111-b1-any"];

/// a_1 = (1 even, 2 odd), a_2 = (2 even, 1 odd), a_3 ≡ 3, so a_1 + a_2 − a_3 = 0.
fn alternating_means() -> [SeqGen; 3] {
    [
        SeqGen::Alternating { even: 1.0, odd: 2.0 },
        SeqGen::Alternating { even: 2.0, odd: 1.0 },
        SeqGen::constant(3.0),
    ]
}

fn rows(b: [SeqGen; 3], a: [SeqGen; 3]) -> Vec<RowGen> {
    b.into_iter().zip(a).map(|(b, a)| RowGen { b, a }).collect()
}

/// b ≡ 1 with the alternating means.
pub fn ex_a1(window: usize) -> Result<MeasureSpec> {
    MeasureSpec::from_generators(window, &rows([SeqGen::constant(1.0), SeqGen::constant(1.0), SeqGen::constant(1.0)], alternating_means()))
}

/// b = (1, |n|, |n|) with value 1 at n = 0, alternating means.
pub fn ex_011_11(window: usize) -> Result<MeasureSpec> {
    MeasureSpec::from_generators(window, &rows([SeqGen::constant(1.0), SeqGen::power(1.0), SeqGen::power(1.0)], alternating_means()))
}

/// Standard covariance with the alternating means: a reducible case.
pub fn ex_111_b1_alt(window: usize) -> Result<MeasureSpec> {
    ex_a1(window)
}

/// Standard covariance with means a_1 ≡ 1, a_2 = ±1 alternating, a_3 = |n|^{1/2}:
/// no nontrivial combination is square-summable.
pub fn ex_111_b1_any(window: usize) -> Result<MeasureSpec> {
    MeasureSpec::from_generators(
        window,
        &rows(
            [SeqGen::constant(1.0), SeqGen::constant(1.0), SeqGen::constant(1.0)],
            [SeqGen::constant(1.0), SeqGen::Alternating { even: 1.0, odd: -1.0 }, SeqGen::power(0.5)],
        ),
    )
}

pub fn named_example(name: &str, window: usize) -> Result<MeasureSpec> {
    match name {
        "ex-a1" => ex_a1(window),
        "ex-011-11" => ex_011_11(window),
        "ex-111-b1-alt" => ex_111_b1_alt(window),
        "ex-111-b1-any" => ex_111_b1_any(window),
        other => Err(MeasureError::UnknownExample(other.to_string())),
    }
}
