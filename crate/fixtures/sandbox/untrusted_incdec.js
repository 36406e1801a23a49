// outcome: rejected
var o = {n: 1};
var k = "n";
o[k]++;
