# qslkit Package
