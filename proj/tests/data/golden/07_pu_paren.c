void bump(int **pp) {
    *(*pp) += 1;
    int v = *(pp[0]);
}
