void fill(int n) {
    int values[16];
    for (int i = 0; i <= n; i++) {
        values[i] = i;
    }
}
