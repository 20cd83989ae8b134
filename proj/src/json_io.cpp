#include "capgeo/json_io.hpp"
