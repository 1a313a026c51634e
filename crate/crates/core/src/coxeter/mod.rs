//! Coxeter groups of types A and B, local systems over their Artin groups and
//! the Salvetti chain complex.

mod complex;
mod group;
mod local;

pub use complex::{
    build_complex, select_config, select_config_for, trivial_gates, ChainComplex, ComplexConfig,
    ComplexError, ComplexJson, SignRule,
};
pub use group::{
    binomial, min_coset_reps, CosetRep, CoxeterError, CoxeterSpec, Element, Family, GenSet, Side,
};
pub use local::{
    t_companion, t_local_system, LocalSystem, LocalSystemError, Sign, TModule, TVariant,
};
