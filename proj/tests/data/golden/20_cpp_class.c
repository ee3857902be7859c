class Buffer {
 public:
  int get(int i) const { return data_[i]; }
  void put(const char *s) { strncpy(raw_, s, sizeof(raw_) - 1); }
 private:
  int data_[8];
  char raw_[16];
};
