int scale(int x) {
    int y = 2 * 3;
    return 4 + x;
}
