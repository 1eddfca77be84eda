//! Holds the `acceptance` integration test target. Kept in its own package so that it runs after
//! the unit and CLI tests of the other crates.
