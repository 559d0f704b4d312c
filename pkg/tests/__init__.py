# qslkit Tests Package
