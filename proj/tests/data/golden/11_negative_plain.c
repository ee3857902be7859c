int clamp(int x) {
    int y;
    y = x;
    if (y > 10) {
        y = 10;
    }
    return y;
}
