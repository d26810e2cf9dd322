#include "varexp/varexp.hpp"
int main() { return 0; }
