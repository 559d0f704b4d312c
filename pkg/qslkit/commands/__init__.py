# qslkit Commands Package
