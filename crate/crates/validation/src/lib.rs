//! Holds the `acceptance` test target. It is kept in its own package so a
//! workspace test run reaches it after every other target.
