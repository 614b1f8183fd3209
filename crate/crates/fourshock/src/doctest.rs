//! Book chapters compiled as doc-tests (filled with the book).
