// Placeholder main; replaced by the full CLI once the library is complete.
int main() { return 0; }
