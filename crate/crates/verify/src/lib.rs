//! Holds only the `acceptance` integration target.
