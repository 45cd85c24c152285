use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor coefficient of Lambda_{period} is not an integer: {coeff}")]
    NonIntegralDivisor { period: u64, coeff: String },

    #[error("product-form exponent of period {period} does not fit in 64 bits")]
    ExponentOverflow { period: u64 },

    #[error("product form has a pole of order {order} at t = {point}")]
    PoleAtPoint { point: i8, order: i64 },

    #[error("product form value at t = {point} is not an integer")]
    NonIntegralValue { point: i8 },

    #[error("weights {weights:?} are not primitive (gcd = {gcd})")]
    NonPrimitiveWeights { weights: Vec<u64>, gcd: u64 },

    #[error("invalid degree {0}")]
    InvalidDegree(i64),

    #[error("invalid weight {0}: weights must be positive")]
    InvalidWeight(i64),

    #[error("{0} variables not supported (need 3..=8)")]
    UnsupportedArity(usize),

    #[error("Milnor number prod(d/w_i - 1) = {0} is not an integer")]
    NonIntegralMilnor(String),

    #[error("Orlik c-value for subset {subset:?} is not an integer")]
    NonIntegralOrlikC { subset: Vec<usize> },

    #[error("gcd(p, d) = gcd({p}, {d}) != 1")]
    CoprimalityViolated { p: u64, d: u64 },

    #[error("cover link has even n = {0}; the mod-8 criterion needs n odd")]
    DimensionUnsupported(usize),

    #[error("no two-cycle witness for the split")]
    WitnessNotFound,

    #[error("input exceeds oracle scale: {0}")]
    ScaleExceeded(String),

    #[error("product form is not a polynomial")]
    NotAPolynomial,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}
