#pragma once
namespace switchlab::cli { inline int run(int, char**) { return 2; } }
