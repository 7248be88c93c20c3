use num_bigint::BigInt;

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

pub(crate) fn ser_rational<S: serde::Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub(crate) fn ser_rationals<S: serde::Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(ToString::to_string))
}

pub(crate) fn ser_opt_rationals<S: serde::Serializer>(xs: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    match xs {
        Some(v) => ser_rationals(v, s),
        None => s.serialize_none(),
    }
}
