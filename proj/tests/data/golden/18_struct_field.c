struct packet { int len; char data[64]; };
int last(struct packet *pkt) {
    return pkt->data[pkt->len - 1];
}
