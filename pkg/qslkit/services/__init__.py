# qslkit Services Package
