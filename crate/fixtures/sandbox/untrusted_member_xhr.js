// outcome: certified
// Dotted reads of the protected name are rewritten like computed ones.
var w = window;
print(w.XMLHttpRequest);
print(typeof w.print);
